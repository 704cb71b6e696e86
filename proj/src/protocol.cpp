#include "kljn/protocol.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kljn {

namespace {

Choice nearest_in_log(double measured, double v_low, double v_high)
{
    const double lm = std::log(measured);
    return std::abs(lm - std::log(v_low)) <= std::abs(lm - std::log(v_high)) ? Choice::L
                                                                             : Choice::H;
}

EndMeasurement measure(const EndView& v)
{
    return {mean(v.i), mean(v.u), ac_variance(v.i), ac_variance(v.u)};
}

TimeSeries with_reading_noise(const TimeSeries& ts, double rms, const RngStream& stream)
{
    if (rms <= 0.0)
        return ts;
    auto noise = gaussian_noise(stream, rms * rms, ts.size(), ts.unit);
    TimeSeries out = ts;
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += noise[k];
    return out;
}

double comparison_epsilon(const DetectorConfig& cfg, const PhysicsConfig& physics,
                          const TimeSeries& a, const TimeSeries& b)
{
    if (!cfg.epsilon && physics.measurement_noise_rms > 0.0)
        return 5.0 * physics.measurement_noise_rms;
    const double rel = cfg.epsilon.value_or(kDefaultRelativeEpsilon);
    const double ref = std::sqrt(0.5 * (ac_variance(a) + ac_variance(b)));
    return std::max(rel * ref, std::numeric_limits<double>::min());
}

}  // namespace

void DetectorConfig::validate() const
{
    if (epsilon && !(*epsilon > 0.0))
        throw std::invalid_argument("detectors.epsilon must be > 0");
    if (!(kappa > 0.0))
        throw std::invalid_argument("detectors.kappa must be > 0");
}

Choice select_resistor(const RngStream& stream)
{
    auto eng = stream.engine();
    return (eng() >> 63) != 0 ? Choice::H : Choice::L;
}

Choice classify_partner(double own_R, double measured_i_variance, const PartyConfig& partner,
                        const PhysicsConfig& physics)
{
    if (!(measured_i_variance > 0.0))
        throw std::invalid_argument("classify_partner: measured variance must be > 0");
    if (!(own_R > 0.0))
        throw std::invalid_argument("classify_partner: own resistance must be > 0");
    const double D = physics.noise_scale_D;
    return nearest_in_log(measured_i_variance, D / (own_R + partner.r_low),
                          D / (own_R + partner.r_high));
}

Choice classify_partner_from_voltage(double own_R, double measured_u_variance,
                                     const PartyConfig& partner, const PhysicsConfig& physics)
{
    if (!(measured_u_variance > 0.0))
        throw std::invalid_argument("classify_partner_from_voltage: measured variance must be > 0");
    if (!(own_R > 0.0))
        throw std::invalid_argument("classify_partner_from_voltage: own resistance must be > 0");
    const double D = physics.noise_scale_D;
    auto hyp = [&](double r) { return D * own_R * r / (own_R + r); };
    return nearest_in_log(measured_u_variance, hyp(partner.r_low), hyp(partner.r_high));
}

Classification classify_end(double own_R, double i_variance, double u_variance,
                            const PartyConfig& partner, const PhysicsConfig& physics)
{
    const double D = physics.noise_scale_D;
    const bool current_feasible = i_variance <= D / own_R;
    const bool voltage_feasible = u_variance <= D * own_R;
    if (!current_feasible && voltage_feasible && u_variance > 0.0)
        return {classify_partner_from_voltage(own_R, u_variance, partner, physics), true};
    return {classify_partner(own_R, i_variance, partner, physics), false};
}

std::optional<int> bit_from_state(Choice alice, Choice bob)
{
    if (alice == Choice::H && bob == Choice::L)
        return 0;
    if (alice == Choice::L && bob == Choice::H)
        return 1;
    return std::nullopt;
}

void BepRecord::drop_waveforms()
{
    alice_view = {};
    bob_view = {};
    eve.synthesized.clear();
    eve.synthesized.shrink_to_fit();
}

BepRecord run_bep(const Parties& parties, const ScenarioConfig& scenario,
                  const PhysicsConfig& physics, const DetectorConfig& detectors,
                  const RngStream& bep_stream)
{
    physics.validate();
    parties.alice.validate("alice");
    parties.bob.validate("bob");
    scenario.validate();
    detectors.validate();

    const std::size_t n = physics.samples_per_bep;
    const double D = physics.noise_scale_D;

    BepRecord rec;
    rec.alice_choice = select_resistor(bep_stream.child(kAliceChoice));
    rec.bob_choice = select_resistor(bep_stream.child(kBobChoice));
    rec.state = make_state(rec.alice_choice, rec.bob_choice);
    rec.secure = is_secure(rec.state);

    const double R_A = parties.alice.resistance(rec.alice_choice);
    const double R_B = parties.bob.resistance(rec.bob_choice);
    HonestEnd alice{&parties.alice, rec.alice_choice,
                    Emf{gaussian_noise(bep_stream.child(kAliceNoise), D * R_A, n),
                        parties.alice.dc_volt}};
    HonestEnd bob{&parties.bob, rec.bob_choice,
                  Emf{gaussian_noise(bep_stream.child(kBobNoise), D * R_B, n), parties.bob.dc_volt}};

    auto outcome = simulate_topology(alice, bob, scenario, physics, bep_stream.child(kEve));
    rec.alice_view = std::move(outcome.alice);
    rec.bob_view = std::move(outcome.bob);
    rec.eve = std::move(outcome.eve);
    rec.alice_loop_ohm = outcome.alice_loop_ohm;
    rec.bob_loop_ohm = outcome.bob_loop_ohm;

    rec.alice_meas = measure(rec.alice_view);
    rec.bob_meas = measure(rec.bob_view);
    rec.alice_classified =
        classify_end(R_A, rec.alice_meas.var_i, rec.alice_meas.var_u, parties.bob, physics);
    rec.bob_classified =
        classify_end(R_B, rec.bob_meas.var_i, rec.bob_meas.var_u, parties.alice, physics);

    // Readings exchanged over the public channel.
    const double mnr = physics.measurement_noise_rms;
    const auto rep_ai = with_reading_noise(rec.alice_view.i, mnr, bep_stream.child({kAliceReport, 0}));
    const auto rep_au = with_reading_noise(rec.alice_view.u, mnr, bep_stream.child({kAliceReport, 1}));
    const auto rep_bi = with_reading_noise(rec.bob_view.i, mnr, bep_stream.child({kBobReport, 0}));
    const auto rep_bu = with_reading_noise(rec.bob_view.u, mnr, bep_stream.child({kBobReport, 1}));

    auto& det = rec.detection;
    det.epsilon_i = comparison_epsilon(detectors, physics, rep_ai, rep_bi);
    det.epsilon_u = comparison_epsilon(detectors, physics, rep_au, rep_bu);
    const CompareChannel channels[] = {{&rep_ai, &rep_bi, det.epsilon_i},
                                       {&rep_au, &rep_bu, det.epsilon_u}};
    det.instant = instantaneous_compare(channels);
    det.ac = ac_compare(rep_ai, rep_bi, det.epsilon_i);

    // Each party checks its own DC levels against the no-attack baseline of
    // the state it believes it is in.
    auto dc_tests = [&](Side side, const EndView& view, const EndMeasurement& m, Choice own,
                        Choice partner, DetectorVerdict& vi, DetectorVerdict& vu) {
        const double base_i = expected_dc(side, own, partner, parties.alice, parties.bob,
                                          DcQuantity::current);
        const double base_u = expected_dc(side, own, partner, parties.alice, parties.bob,
                                          DcQuantity::voltage);
        const double rms_i = std::sqrt(m.var_i);
        const double rms_u = std::sqrt(m.var_u);
        vi = dc_average_test(view.i, base_i, rms_i, detectors.kappa);
        vu = dc_average_test(view.u, base_u, rms_u, detectors.kappa);
        return vi.statistic > rms_i || vu.statistic > rms_u;
    };
    det.wide_margin_alice = dc_tests(Side::alice, rec.alice_view, rec.alice_meas, rec.alice_choice,
                                     rec.alice_classified.partner, det.dc_alice_i, det.dc_alice_u);
    det.wide_margin_bob = dc_tests(Side::bob, rec.bob_view, rec.bob_meas, rec.bob_choice,
                                   rec.bob_classified.partner, det.dc_bob_i, det.dc_bob_u);

    rec.aborted = det.any(detectors.abort_on);
    if (!rec.aborted) {
        rec.alice_bit = bit_from_state(rec.alice_choice, rec.alice_classified.partner);
        rec.bob_bit = bit_from_state(rec.bob_classified.partner, rec.bob_choice);
    }
    return rec;
}

KeyRecord exchange_key(std::size_t target_bits, const Parties& parties,
                       const ScenarioConfig& scenario, const PhysicsConfig& physics,
                       const DetectorConfig& detectors, const RngStream& stream,
                       bool keep_waveforms, std::size_t max_beps)
{
    if (target_bits == 0)
        throw std::invalid_argument("exchange_key: target_bits must be >= 1");
    if (max_beps == 0)
        max_beps = 64 * target_bits + 1024;

    KeyRecord key;
    for (std::size_t j = 0; j < max_beps; ++j) {
        auto rec = run_bep(parties, scenario, physics, detectors, stream.child(j));
        if (!keep_waveforms)
            rec.drop_waveforms();
        if (rec.eve.secure_emulation)
            ++key.secure_emulations;

        const bool aborted = rec.aborted;
        // Both parties publicly agree to keep a BEP only if both extracted a bit.
        if (!aborted && rec.alice_bit && rec.bob_bit) {
            key.alice_key.push_back(*rec.alice_bit);
            key.bob_key.push_back(*rec.bob_bit);
        }
        key.beps.push_back(std::move(rec));
        if (aborted) {
            key.aborted = true;
            key.abort_bep = j;
            return key;
        }
        if (key.alice_key.size() >= target_bits) {
            key.complete = true;
            return key;
        }
    }
    return key;
}

}  // namespace kljn
