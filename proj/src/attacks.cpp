#include "kljn/attacks.hpp"

#include "kljn/protocol.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace kljn {

namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 5> kVariants{{
    {Variant::none, "none"},
    {Variant::mitm_resistor, "mitm_resistor"},
    {Variant::twin_current, "twin_current"},
    {Variant::twin_voltage, "twin_voltage"},
    {Variant::injection, "injection"},
}};

// Eve's substreams.
enum EveStream : std::uint64_t {
    kChoiceTowardAlice = 0,
    kChoiceTowardBob = 1,
    kNoiseTowardAlice = 2,
    kNoiseTowardBob = 3,
    kTwinDrive = 4,
    kInjection = 5,
    kCommitCoin = 6,
};

TimeSeries negated(TimeSeries ts)
{
    for (auto& x : ts.samples)
        x = -x;
    return ts;
}

void require_variant(const ScenarioConfig& s, Variant v, const char* who)
{
    if (s.variant != v)
        throw std::invalid_argument(std::string(who) + ": scenario variant mismatch");
}

}  // namespace

std::string_view to_string(Variant v)
{
    for (const auto& [var, name] : kVariants)
        if (var == v)
            return name;
    return "?";
}

std::optional<Variant> parse_variant(std::string_view text)
{
    for (const auto& [var, name] : kVariants)
        if (name == text)
            return var;
    return std::nullopt;
}

std::string variant_names()
{
    std::string out;
    for (const auto& [var, name] : kVariants) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

void ScenarioConfig::validate() const
{
    if (!(injection_rms >= 0.0) || !std::isfinite(injection_rms))
        throw std::invalid_argument("scenario.injection_rms_amp must be >= 0");
    if (!std::isfinite(series_dc_volt))
        throw std::invalid_argument("scenario.series_dc_volt must be finite");
    if (dc_compensation && variant != Variant::mitm_resistor && variant != Variant::twin_voltage)
        throw std::invalid_argument(
            "scenario.dc_compensation is only valid for mitm_resistor and twin_voltage");
    if (committed_emulation && variant != Variant::twin_voltage)
        throw std::invalid_argument("scenario.committed_emulation is only valid for twin_voltage");
    if (variant == Variant::twin_voltage && dc_compensation && !committed_emulation)
        throw std::invalid_argument(
            "scenario.committed_emulation is required for twin_voltage with dc_compensation");
    if (injection_rms > 0.0 && variant != Variant::injection)
        throw std::invalid_argument("scenario.injection_rms_amp is only valid for injection");
    if (series_dc_volt != 0.0 && variant != Variant::twin_current)
        throw std::invalid_argument("scenario.series_dc_volt is only valid for twin_current");
}

AttackOutcome no_attack_bep(const HonestEnd& alice, const HonestEnd& bob)
{
    const double R_A = alice.resistance();
    const double R_B = bob.resistance();
    auto loop = solve_single_loop(alice.emf, R_A, bob.emf, R_B);
    AttackOutcome out;
    out.alice = loop.alice_view();
    out.bob = loop.bob_view();
    out.alice_loop_ohm = out.bob_loop_ohm = R_A + R_B;
    return out;
}

AttackOutcome mitm_resistor_bep(const HonestEnd& alice, const HonestEnd& bob,
                                const ScenarioConfig& scenario, const PhysicsConfig& physics,
                                const RngStream& eve_stream)
{
    require_variant(scenario, Variant::mitm_resistor, "mitm_resistor_bep");
    const std::size_t n = alice.emf.size();
    const bool compensate = scenario.dc_compensation && scenario.eve_knows_dc;

    // Toward Alice Eve impersonates Bob, toward Bob she impersonates Alice.
    const Choice to_alice = select_resistor(eve_stream.child(kChoiceTowardAlice));
    const Choice to_bob = select_resistor(eve_stream.child(kChoiceTowardBob));
    const double R_EA = bob.config->resistance(to_alice);
    const double R_EB = alice.config->resistance(to_bob);

    Emf eve_a{gaussian_noise(eve_stream.child(kNoiseTowardAlice), physics.noise_scale_D * R_EA, n),
              compensate ? bob.config->dc_volt : 0.0};
    Emf eve_b{gaussian_noise(eve_stream.child(kNoiseTowardBob), physics.noise_scale_D * R_EB, n),
              compensate ? alice.config->dc_volt : 0.0};

    const double R_A = alice.resistance();
    const double R_B = bob.resistance();
    auto loop_a = solve_single_loop(alice.emf, R_A, eve_a, R_EA);
    auto loop_b = solve_single_loop(eve_b, R_EB, bob.emf, R_B);

    AttackOutcome out;
    out.alice = loop_a.alice_view();
    out.bob = loop_b.bob_view();
    out.alice_loop_ohm = R_A + R_EA;
    out.bob_loop_ohm = R_EB + R_B;
    out.eve.emulated_toward_alice = to_alice;
    out.eve.emulated_toward_bob = to_bob;
    out.eve.synthesized = {std::move(eve_a.noise), std::move(eve_b.noise)};
    return out;
}

AttackOutcome twin_current_bep(const HonestEnd& alice, const HonestEnd& bob,
                               const ScenarioConfig& scenario, const PhysicsConfig& physics,
                               const RngStream& eve_stream)
{
    require_variant(scenario, Variant::twin_current, "twin_current_bep");
    const std::size_t n = alice.emf.size();
    const double R_A = alice.resistance();
    const double R_B = bob.resistance();

    // Eve relays the resistor pair; the loop-current variance of the pair
    // is symmetric so she needs no knowledge of which end holds which.
    auto i_E = gaussian_noise(eve_stream.child(kTwinDrive), physics.noise_scale_D / (R_A + R_B),
                              n, Unit::ampere);

    auto port_a = solve_current_driven(alice.emf, R_A, i_E, scenario.series_dc_volt);
    // Same waveform in the Alice-to-Bob direction, i.e. into Bob's terminal.
    auto port_b = solve_current_driven(bob.emf, R_B, negated(i_E), scenario.series_dc_volt);

    AttackOutcome out;
    out.alice = {std::move(port_a.u_terminal), std::move(port_a.i)};
    out.bob = {std::move(port_b.u_terminal), negated(std::move(port_b.i))};
    out.eve.emulated_toward_alice = bob.choice;
    out.eve.emulated_toward_bob = alice.choice;
    out.eve.synthesized = {std::move(i_E)};
    return out;
}

AttackOutcome twin_voltage_bep(const HonestEnd& alice, const HonestEnd& bob,
                               const ScenarioConfig& scenario, const PhysicsConfig& physics,
                               const RngStream& eve_stream)
{
    require_variant(scenario, Variant::twin_voltage, "twin_voltage_bep");
    if (scenario.dc_compensation && !scenario.committed_emulation)
        throw std::invalid_argument("twin_voltage_bep: dc_compensation needs committed_emulation");

    const std::size_t n = alice.emf.size();
    const PartyConfig& ca = *alice.config;
    const PartyConfig& cb = *bob.config;
    const bool compensate = scenario.dc_compensation && scenario.eve_knows_dc;

    // Per-end commitments. Toward Alice: (assumed Alice, emulated Bob);
    // toward Bob: (assumed Bob, emulated Alice).
    Emulation to_alice{alice.choice, bob.choice};
    Emulation to_bob{bob.choice, alice.choice};
    bool secure_emulation = false;
    if (scenario.committed_emulation) {
        const auto& policy = *scenario.committed_emulation;
        if (policy.random) {
            // Eve knows the resistance values but not their location. An
            // equal pair forces the same DC whichever value it is; a mixed
            // pair needs a guess of who holds R_L.
            if (alice.choice == bob.choice) {
                to_alice = {alice.choice, bob.choice};
                to_bob = {bob.choice, alice.choice};
            } else {
                const Choice guess_alice = select_resistor(eve_stream.child(kCommitCoin));
                to_alice = {guess_alice, other(guess_alice)};
                to_bob = {other(guess_alice), guess_alice};
                secure_emulation = true;
            }
        } else {
            to_alice = policy.toward_alice;
            to_bob = policy.toward_bob;
            secure_emulation = to_alice.assumed_party != to_alice.emulated ||
                               to_bob.assumed_party != to_bob.emulated;
        }
    }

    // The AC drive matches the wire-voltage variance of the emulated pair
    // (the pair seen toward Alice; both ends get the same waveform).
    const double R_assumed = ca.resistance(to_alice.assumed_party);
    const double R_emulated = cb.resistance(to_alice.emulated);
    const double v_ac = physics.noise_scale_D * R_assumed * R_emulated / (R_assumed + R_emulated);
    auto u_E = gaussian_noise(eve_stream.child(kTwinDrive), v_ac, n, Unit::volt);

    double dc_a = 0.0;
    double dc_b = 0.0;
    if (compensate) {
        dc_a = dc_wire_voltage(ca.dc_volt, cb.dc_volt, ca.resistance(to_alice.assumed_party),
                               cb.resistance(to_alice.emulated));
        dc_b = dc_wire_voltage(ca.dc_volt, cb.dc_volt, ca.resistance(to_bob.emulated),
                               cb.resistance(to_bob.assumed_party));
    }
    TimeSeries drive_a = u_E;
    TimeSeries drive_b = u_E;
    for (std::size_t k = 0; k < n; ++k) {
        drive_a[k] += dc_a;
        drive_b[k] += dc_b;
    }

    auto port_a = solve_voltage_driven(alice.emf, alice.resistance(), drive_a);
    auto port_b = solve_voltage_driven(bob.emf, bob.resistance(), drive_b);

    AttackOutcome out;
    out.alice = {std::move(port_a.u_terminal), std::move(port_a.i)};
    out.bob = {std::move(port_b.u_terminal), negated(std::move(port_b.i))};
    out.eve.emulated_toward_alice = to_alice.emulated;
    out.eve.emulated_toward_bob = to_bob.emulated;
    if (scenario.committed_emulation) {
        out.eve.commit_alice = to_alice;
        out.eve.commit_bob = to_bob;
    }
    out.eve.secure_emulation = secure_emulation;
    out.eve.synthesized = {std::move(u_E)};
    return out;
}

AttackOutcome injection_bep(const HonestEnd& alice, const HonestEnd& bob,
                            const ScenarioConfig& scenario, const PhysicsConfig& physics,
                            const RngStream& eve_stream)
{
    require_variant(scenario, Variant::injection, "injection_bep");
    if (!(scenario.injection_rms >= 0.0))
        throw std::invalid_argument("injection_bep: injection_rms must be >= 0");
    (void)physics;

    const std::size_t n = alice.emf.size();
    const double R_A = alice.resistance();
    const double R_B = bob.resistance();
    auto i_inj = gaussian_noise(eve_stream.child(kInjection),
                                scenario.injection_rms * scenario.injection_rms, n, Unit::ampere);
    auto sol = solve_injection(alice.emf, R_A, bob.emf, R_B, i_inj);

    AttackOutcome out;
    out.alice_loop_ohm = out.bob_loop_ohm = R_A + R_B;
    // Eve's probe toward Alice reads the current flowing from the node into
    // Alice's branch, -i_A.
    double corr_a = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        corr_a -= i_inj[k] * sol.i_A[k];
    out.eve.corr_toward_A = corr_a / static_cast<double>(n);
    out.eve.corr_toward_B = cross_correlation(i_inj, sol.i_B);
    out.eve.guessed_state = eve_guess_state(out.eve);

    out.alice = {sol.u_node, std::move(sol.i_A)};
    out.bob = {std::move(sol.u_node), std::move(sol.i_B)};
    out.eve.synthesized = {std::move(i_inj)};
    return out;
}

AttackOutcome simulate_topology(const HonestEnd& alice, const HonestEnd& bob,
                                const ScenarioConfig& scenario, const PhysicsConfig& physics,
                                const RngStream& eve_stream)
{
    switch (scenario.variant) {
    case Variant::none: return no_attack_bep(alice, bob);
    case Variant::mitm_resistor: return mitm_resistor_bep(alice, bob, scenario, physics, eve_stream);
    case Variant::twin_current: return twin_current_bep(alice, bob, scenario, physics, eve_stream);
    case Variant::twin_voltage: return twin_voltage_bep(alice, bob, scenario, physics, eve_stream);
    case Variant::injection: return injection_bep(alice, bob, scenario, physics, eve_stream);
    }
    throw std::invalid_argument("simulate_topology: unknown variant");
}

std::optional<State> eve_guess_state(const EveRecord& record, double threshold)
{
    if (!record.corr_toward_A || !record.corr_toward_B)
        return std::nullopt;
    const double diff = *record.corr_toward_A - *record.corr_toward_B;
    if (std::abs(diff) <= threshold)
        return std::nullopt;
    return diff > 0.0 ? State::LH : State::HL;
}

}  // namespace kljn
