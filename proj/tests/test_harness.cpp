#include "kljn/harness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace kljn;

namespace {

Experiment default_experiment()
{
    Experiment ex;
    ex.parties = {{1e3, 1e4, 5e-3}, {1e3, 1e4, -5e-3}};
    return ex;
}

bool same_rows(const std::vector<BepSummary>& a, const std::vector<BepSummary>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& x = a[k];
        const auto& y = b[k];
        if (x.trial != y.trial || x.bep_index != y.bep_index || x.state != y.state ||
            x.mean_i_alice != y.mean_i_alice || x.var_i_alice != y.var_i_alice ||
            x.instant.first_flag_index != y.instant.first_flag_index ||
            x.corr_toward_A != y.corr_toward_A || x.alice_bit != y.alice_bit)
            return false;
    }
    return true;
}

std::vector<HiddenPoint> exact_curve(double p, std::initializer_list<std::size_t> hs)
{
    std::vector<HiddenPoint> out;
    for (auto h : hs) {
        const double v = std::pow(p, static_cast<double>(h));
        out.push_back({h, {v, v, v}});
    }
    return out;
}

}  // namespace

TEST_CASE("fit_exponential_decay recovers an exact power law")
{
    const auto curve = exact_curve(0.9, {1, 2, 5, 10, 20});
    const auto fit = fit_exponential_decay(curve);
    CHECK(fit.p == doctest::Approx(0.9));
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.points == 5);
}

TEST_CASE("fit_exponential_decay skips 0 and 1 and needs three points")
{
    auto curve = exact_curve(0.5, {1, 2, 3});
    curve.push_back({40, {0.0, 0.0, 0.1}});
    curve.insert(curve.begin(), HiddenPoint{0, {1.0, 0.9, 1.0}});
    CHECK(fit_exponential_decay(curve).points == 3);
    CHECK_THROWS_AS(fit_exponential_decay(exact_curve(0.5, {1, 2})), std::invalid_argument);
}

TEST_CASE("property: fit of a noisy geometric curve is close to p")
{
    oracle::Gen g(3);
    for (int rep = 0; rep < 30; ++rep) {
        const double p = g.uniform(0.6, 0.98);
        auto curve = exact_curve(p, {1, 2, 5, 10, 20});
        for (auto& pt : curve)
            pt.hidden.estimate *= 1.0 + g.uniform(-1e-3, 1e-3);
        CHECK(fit_exponential_decay(curve).p == doctest::Approx(p).epsilon(1e-3));
    }
}

TEST_CASE("property: Tally merge is associative, commutative and equals one pass")
{
    const auto rep = run_monte_carlo(default_experiment(), {300, 4, 8, {1, 2}, RunMode::bep, 1});
    oracle::Gen g(4);
    for (int r = 0; r < 20; ++r) {
        const std::size_t i = g.index(0, 300), j = g.index(i, 300);
        Tally a, b, c, whole;
        for (std::size_t k = 0; k < rep.rows.size(); ++k) {
            whole.add(rep.rows[k]);
            (k < i ? a : k < j ? b : c).add(rep.rows[k]);
        }
        Tally ab_c = a;
        ab_c.merge(b);
        ab_c.merge(c);
        Tally bc = b;
        bc.merge(c);
        Tally a_bc = a;
        a_bc.merge(bc);
        Tally cba = c;
        cba.merge(b);
        cba.merge(a);
        CHECK(ab_c == a_bc);
        CHECK(ab_c == cba);
        CHECK(ab_c == whole);
    }
}

TEST_CASE("thread count does not change a single row")
{
    auto ex = default_experiment();
    ex.scenario.variant = Variant::injection;
    ex.scenario.injection_rms = 1e-6;
    RunSettings s{97, 21, 8, {1, 2, 5}, RunMode::bep, 1};
    const auto serial = run_monte_carlo(ex, s);
    s.threads = 4;
    const auto parallel = run_monte_carlo(ex, s);
    CHECK(same_rows(serial.rows, parallel.rows));
    CHECK(serial.tally == parallel.tally);

    s.mode = RunMode::key;
    s.trials = 9;
    ex.scenario = {};
    const auto ks = run_monte_carlo(ex, s);
    s.threads = 1;
    CHECK(same_rows(ks.rows, run_monte_carlo(ex, s).rows));
}

TEST_CASE("no-attack report")
{
    const auto rep = run_monte_carlo(default_experiment(), {500, 1, 8, {1, 2, 5}, RunMode::bep, 0});
    CHECK(rep.tally.beps == 500);
    CHECK(rep.detection_rate.estimate == 0.0);
    CHECK(rep.honest_ber.estimate == 0.0);
    CHECK(rep.secure_fraction.overlaps(0.5, 0.5));
    CHECK(rep.hidden_curve.size() == 3);
    CHECK_FALSE(rep.eve_accuracy.has_value());
    CHECK(rep.strata.size() == 4);  // one per state
}

TEST_CASE("key mode: honest runs complete with agreeing keys")
{
    const auto rep = run_monte_carlo(default_experiment(), {6, 2, 16, {1}, RunMode::key, 0});
    REQUIRE(rep.keys.size() == 6);
    for (const auto& k : rep.keys) {
        CHECK(k.complete);
        CHECK(k.keys_agree);
        CHECK(k.key_bits == 16);
    }
    CHECK(rep.abort_rate->estimate == 0.0);
    CHECK(rep.key_agreement->estimate == 1.0);
}

TEST_CASE("aggregate on synthetic rows")
{
    std::vector<BepSummary> rows(4);
    rows[0].aborted = rows[0].flag_instant = true;
    rows[1].secure = true;
    rows[1].alice_bit = 1;
    rows[1].bob_bit = 0;
    rows[2].secure = true;
    rows[2].alice_bit = rows[2].bob_bit = 1;
    for (auto& r : rows)
        r.instant.length = 10;
    const auto rep = aggregate(default_experiment(), {4, 0, 1, {1}, RunMode::bep, 1}, rows, {});
    CHECK(rep.detection_rate.estimate == 0.25);
    CHECK(rep.honest_ber.estimate == 0.5);
    CHECK(rep.secure_fraction.estimate == 0.5);
}

TEST_CASE("sweep")
{
    const double gaps[] = {0.0, 0.02};
    const RunSettings s{40, 3, 8, {1}, RunMode::bep, 1};
    const auto reps = sweep(default_experiment(), s, "dc_gap", gaps);
    REQUIRE(reps.size() == 2);
    // value i runs on substream i
    const auto direct = run_monte_carlo(with_parameter(default_experiment(), SweepParameter::dc_gap, 0.02),
                                        s, RngStream(3).child(1));
    CHECK(same_rows(reps[1].rows, direct.rows));
    CHECK_THROWS_WITH_AS(sweep(default_experiment(), s, "gap", gaps),
                         doctest::Contains("allowed"), std::invalid_argument);
}

TEST_CASE("with_parameter")
{
    const auto ex = with_parameter(default_experiment(), SweepParameter::dc_gap, 0.4);
    CHECK(ex.parties.alice.dc_volt == 0.2);
    CHECK(ex.parties.bob.dc_volt == -0.2);
    CHECK(with_parameter(ex, SweepParameter::kappa, 3.0).detectors.kappa == 3.0);
    CHECK(*with_parameter(ex, SweepParameter::epsilon, 0.5).detectors.epsilon == 0.5);
    CHECK(with_parameter(ex, SweepParameter::samples_per_bep, 100).physics.samples_per_bep == 100);
    CHECK_THROWS_AS(with_parameter(ex, SweepParameter::samples_per_bep, 10.5), std::invalid_argument);
    for (auto p : {SweepParameter::dc_gap, SweepParameter::injection_rms, SweepParameter::samples_per_bep,
                   SweepParameter::epsilon, SweepParameter::kappa})
        CHECK(parse_sweep_parameter(to_string(p)) == p);
}

TEST_CASE("run_monte_carlo rejects bad settings")
{
    CHECK_THROWS_AS(run_monte_carlo(default_experiment(), {0, 0, 8, {1}, RunMode::bep, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_monte_carlo(default_experiment(), {1, 0, 0, {1}, RunMode::key, 1}),
                    std::invalid_argument);
}
