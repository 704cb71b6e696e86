#include "kljn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace kljn {

namespace {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

std::string format_ohms(double r)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, r);
    return std::string(buf, res.ptr);
}

Interval empty_rate() { return {0.0, 0.0, 1.0}; }

Interval rate(std::size_t k, std::size_t n) { return n == 0 ? empty_rate() : wilson_interval(k, n); }

}  // namespace

void Experiment::validate() const
{
    physics.validate();
    parties.alice.validate("alice");
    parties.bob.validate("bob");
    scenario.validate();
    detectors.validate();
}

std::string BepSummary::stratum() const
{
    // The own resistor plus the loop sum fixes the ordered pair at each end.
    return std::string(to_string(alice_choice)) + ":" + format_ohms(alice_loop_ohm) + "|" +
           format_ohms(bob_loop_ohm) + ":" + std::string(to_string(bob_choice));
}

BepSummary summarize(const BepRecord& rec, std::size_t trial, std::size_t bep_index)
{
    BepSummary s;
    s.trial = trial;
    s.bep_index = bep_index;
    s.alice_choice = rec.alice_choice;
    s.bob_choice = rec.bob_choice;
    s.state = rec.state;
    s.secure = rec.secure;
    s.alice_classified = rec.alice_classified.partner;
    s.bob_classified = rec.bob_classified.partner;
    s.alice_bit = rec.alice_bit;
    s.bob_bit = rec.bob_bit;
    s.flag_instant = rec.detection.instant.flagged;
    s.flag_dc_alice = rec.detection.flag_dc_alice();
    s.flag_dc_bob = rec.detection.flag_dc_bob();
    s.flag_ac = rec.detection.ac.flagged;
    s.aborted = rec.aborted;
    s.wide_margin = rec.detection.wide_margin_alice || rec.detection.wide_margin_bob;
    s.instant = rec.detection.instant;
    s.mean_i_alice = rec.alice_meas.mean_i;
    s.mean_i_bob = rec.bob_meas.mean_i;
    s.var_i_alice = rec.alice_meas.var_i;
    s.corr_toward_A = rec.eve.corr_toward_A;
    s.corr_toward_B = rec.eve.corr_toward_B;
    s.eve_guess = rec.eve.guessed_state;
    s.secure_emulation = rec.eve.secure_emulation;
    s.alice_loop_ohm = rec.alice_loop_ohm;
    s.bob_loop_ohm = rec.bob_loop_ohm;
    return s;
}

void Tally::add(const BepSummary& row)
{
    ++beps;
    detected += row.aborted ? 1 : 0;
    instant += row.flag_instant ? 1 : 0;
    dc += (row.flag_dc_alice || row.flag_dc_bob) ? 1 : 0;
    ac += row.flag_ac ? 1 : 0;
    wide_margin += row.wide_margin ? 1 : 0;
    secure += row.secure ? 1 : 0;
    misclassified += row.misclassified() ? 1 : 0;
    if (row.alice_bit || row.bob_bit) {
        ++bit_beps;
        bit_errors += row.bits_disagree() ? 1 : 0;
    }
    if (row.corr_toward_A && row.secure) {
        ++eve_secure;
        eve_correct += (row.eve_guess && *row.eve_guess == row.state) ? 1 : 0;
    }
}

void Tally::merge(const Tally& o)
{
    beps += o.beps;
    detected += o.detected;
    instant += o.instant;
    dc += o.dc;
    ac += o.ac;
    wide_margin += o.wide_margin;
    secure += o.secure;
    misclassified += o.misclassified;
    bit_beps += o.bit_beps;
    bit_errors += o.bit_errors;
    eve_secure += o.eve_secure;
    eve_correct += o.eve_correct;
}

DecayFit fit_exponential_decay(std::span<const HiddenPoint> curve)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve) {
        if (p.hidden.estimate > 0.0 && p.hidden.estimate < 1.0)
            pts.emplace_back(static_cast<double>(p.horizon), std::log(p.hidden.estimate));
    }
    if (pts.size() < 3)
        throw std::invalid_argument("fit_exponential_decay: need at least 3 points in (0, 1)");

    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_exponential_decay: horizons must differ");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0;
    for (auto [x, y] : pts) {
        const double r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return {std::exp(slope), r2, pts.size()};
}

std::vector<HiddenPoint> hidden_curve(std::span<const DetectorVerdict> verdicts,
                                      std::span<const std::size_t> horizons)
{
    std::vector<HiddenPoint> out;
    out.reserve(horizons.size());
    for (std::size_t h : horizons)
        out.push_back({h, hidden_probability(verdicts, h)});
    return out;
}

DetectionReport aggregate(const Experiment& experiment, const RunSettings& settings,
                          std::vector<BepSummary> rows, std::vector<KeySummary> keys)
{
    DetectionReport rep;
    rep.scenario = experiment.scenario;
    rep.mode = settings.mode;
    rep.trials = settings.trials;

    for (const auto& r : rows)
        rep.tally.add(r);
    const Tally& t = rep.tally;
    rep.detection_rate = rate(t.detected, t.beps);
    rep.instant_rate = rate(t.instant, t.beps);
    rep.dc_rate = rate(t.dc, t.beps);
    rep.ac_rate = rate(t.ac, t.beps);
    rep.wide_margin_rate = rate(t.wide_margin, t.beps);
    rep.secure_fraction = rate(t.secure, t.beps);
    rep.misclassification_rate = rate(t.misclassified, t.beps);
    rep.honest_ber = rate(t.bit_errors, t.bit_beps);

    std::vector<DetectorVerdict> verdicts;
    verdicts.reserve(rows.size());
    std::map<std::string, std::vector<DetectorVerdict>> by_stratum;
    for (const auto& r : rows) {
        verdicts.push_back(r.instant);
        by_stratum[r.stratum()].push_back(r.instant);
    }
    if (!verdicts.empty()) {
        rep.hidden_curve = hidden_curve(verdicts, settings.horizons);
        rep.per_sample_agreement = per_sample_agreement(verdicts);
        try {
            rep.fit = fit_exponential_decay(rep.hidden_curve);
        } catch (const std::invalid_argument&) {
        }
    }
    for (auto& [key, vs] : by_stratum) {
        StratumReport s;
        s.key = key;
        s.trials = vs.size();
        s.agreement = per_sample_agreement(vs);
        s.curve = hidden_curve(vs, settings.horizons);
        try {
            s.fit = fit_exponential_decay(s.curve);
        } catch (const std::invalid_argument&) {
        }
        rep.strata.push_back(std::move(s));
    }

    if (experiment.scenario.variant == Variant::injection) {
        rep.eve_accuracy = rate(t.eve_correct, t.eve_secure);
        double sa = 0, sb = 0;
        for (const auto& r : rows) {
            sa += r.corr_toward_A.value_or(0.0);
            sb += r.corr_toward_B.value_or(0.0);
        }
        const double n = static_cast<double>(std::max<std::size_t>(rows.size(), 1));
        rep.mean_corr_toward_A = sa / n;
        rep.mean_corr_toward_B = sb / n;
    }

    if (settings.mode == RunMode::key) {
        std::size_t aborted = 0, agree = 0, completed = 0;
        std::vector<double> to_detection;
        for (const auto& k : keys) {
            if (k.aborted) {
                ++aborted;
                rep.secure_beps_to_detection.push_back(k.secure_emulations);
                to_detection.push_back(static_cast<double>(k.secure_emulations));
            }
            if (!k.aborted) {
                ++completed;
                agree += k.keys_agree ? 1 : 0;
            }
        }
        rep.abort_rate = rate(aborted, keys.size());
        rep.key_agreement = rate(agree, completed);
        if (experiment.scenario.committed_emulation && !to_detection.empty())
            rep.mean_secure_beps_to_detection = mean_interval(to_detection);
        rep.keys = std::move(keys);
    }
    rep.rows = std::move(rows);
    return rep;
}

DetectionReport run_monte_carlo(const Experiment& experiment, const RunSettings& settings)
{
    return run_monte_carlo(experiment, settings, RngStream(settings.seed));
}

DetectionReport run_monte_carlo(const Experiment& experiment, const RunSettings& settings,
                                const RngStream& root)
{
    experiment.validate();
    if (settings.trials == 0)
        throw std::invalid_argument("run.trials must be >= 1");
    if (settings.mode == RunMode::key && settings.target_bits == 0)
        throw std::invalid_argument("run.target_bits must be >= 1");

    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = settings.trials;
    std::vector<std::vector<BepSummary>> per_trial(n);
    std::vector<KeySummary> keys(settings.mode == RunMode::key ? n : 0);

    parallel_for(n, settings.threads, [&](std::size_t t) {
        const auto& ex = experiment;
        if (settings.mode == RunMode::bep) {
            auto rec = run_bep(ex.parties, ex.scenario, ex.physics, ex.detectors, root.child(t));
            per_trial[t].push_back(summarize(rec, t, 0));
            return;
        }
        auto key = exchange_key(settings.target_bits, ex.parties, ex.scenario, ex.physics,
                                ex.detectors, root.child(t));
        auto& out = per_trial[t];
        out.reserve(key.beps.size());
        for (std::size_t j = 0; j < key.beps.size(); ++j)
            out.push_back(summarize(key.beps[j], t, j));
        keys[t] = {key.aborted, key.complete, key.beps.size(), key.secure_emulations,
                   key.alice_key.size(), key.alice_key == key.bob_key};
    });

    std::vector<BepSummary> rows;
    for (auto& v : per_trial)
        rows.insert(rows.end(), v.begin(), v.end());

    auto rep = aggregate(experiment, settings, std::move(rows), std::move(keys));
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name)
{
    if (name == "dc_gap") return SweepParameter::dc_gap;
    if (name == "injection_rms") return SweepParameter::injection_rms;
    if (name == "samples_per_bep") return SweepParameter::samples_per_bep;
    if (name == "epsilon") return SweepParameter::epsilon;
    if (name == "kappa") return SweepParameter::kappa;
    return std::nullopt;
}

std::string_view to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::dc_gap: return "dc_gap";
    case SweepParameter::injection_rms: return "injection_rms";
    case SweepParameter::samples_per_bep: return "samples_per_bep";
    case SweepParameter::epsilon: return "epsilon";
    case SweepParameter::kappa: return "kappa";
    }
    return "?";
}

Experiment with_parameter(Experiment ex, SweepParameter parameter, double value)
{
    switch (parameter) {
    case SweepParameter::dc_gap:
        ex.parties.alice.dc_volt = 0.5 * value;
        ex.parties.bob.dc_volt = -0.5 * value;
        break;
    case SweepParameter::injection_rms: ex.scenario.injection_rms = value; break;
    case SweepParameter::samples_per_bep:
        if (!(value >= 2.0) || value != std::floor(value))
            throw std::invalid_argument("sweep: samples_per_bep must be an integer >= 2");
        ex.physics.samples_per_bep = static_cast<std::size_t>(value);
        break;
    case SweepParameter::epsilon: ex.detectors.epsilon = value; break;
    case SweepParameter::kappa: ex.detectors.kappa = value; break;
    }
    return ex;
}

std::vector<DetectionReport> sweep(const Experiment& base, const RunSettings& settings,
                                   SweepParameter parameter, std::span<const double> values)
{
    std::vector<DetectionReport> out;
    out.reserve(values.size());
    const RngStream root(settings.seed);
    for (std::size_t i = 0; i < values.size(); ++i)
        out.push_back(run_monte_carlo(with_parameter(base, parameter, values[i]), settings,
                                      root.child(i)));
    return out;
}

std::vector<DetectionReport> sweep(const Experiment& base, const RunSettings& settings,
                                   std::string_view parameter, std::span<const double> values)
{
    auto p = parse_sweep_parameter(parameter);
    if (!p)
        throw std::invalid_argument("sweep: unknown parameter '" + std::string(parameter) +
                                    "' (allowed: dc_gap, injection_rms, samples_per_bep, "
                                    "epsilon, kappa)");
    return sweep(base, settings, *p, values);
}

}  // namespace kljn
