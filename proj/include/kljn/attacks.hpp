#pragma once

// Eve's strategies as topology builders. Each builder takes the honest
// parties' synthesized EMFs and returns what Alice and Bob observe at
// their ends plus Eve's own record.

#include "kljn/circuit.hpp"
#include "kljn/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kljn {

enum class Variant { none, mitm_resistor, twin_current, twin_voltage, injection };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view text);
/// "none, mitm_resistor, ..." for error messages.
std::string variant_names();

/// What Eve pretends toward one end: the resistor she assumes the party
/// connected and the resistor she emulates for the far party.
struct Emulation {
    Choice assumed_party = Choice::L;
    Choice emulated = Choice::H;
    bool operator==(const Emulation&) const = default;
};

/// Fixed per-end commitments, or a fresh draw every BEP.
struct CommitmentPolicy {
    bool random = true;
    Emulation toward_alice{Choice::L, Choice::H};
    Emulation toward_bob{Choice::H, Choice::L};
};

struct ScenarioConfig {
    Variant variant = Variant::none;
    bool dc_compensation = false;
    std::optional<CommitmentPolicy> committed_emulation;
    double injection_rms = 0.0;   ///< amperes
    double series_dc_volt = 0.0;  ///< volts, twin-current futility test
    bool eve_knows_dc = true;

    void validate() const;
};

struct EveRecord {
    std::optional<State> guessed_state;
    std::optional<double> corr_toward_A;
    std::optional<double> corr_toward_B;
    std::optional<Choice> emulated_toward_alice;
    std::optional<Choice> emulated_toward_bob;
    std::optional<Emulation> commit_alice;
    std::optional<Emulation> commit_bob;
    bool secure_emulation = false;
    /// Eve's generator waveforms (emulator noise, twin drive or injection).
    std::vector<TimeSeries> synthesized;
};

/// An honest party's inputs for one BEP.
struct HonestEnd {
    const PartyConfig* config;
    Choice choice;
    Emf emf;

    double resistance() const { return config->resistance(choice); }
};

struct AttackOutcome {
    EndView alice;
    EndView bob;
    EveRecord eve;
    /// Resistance sum of the loop each party is connected into; equal for
    /// the intact wire. Zero where an ideal source terminates the loop.
    double alice_loop_ohm = 0.0;
    double bob_loop_ohm = 0.0;
};

AttackOutcome no_attack_bep(const HonestEnd& alice, const HonestEnd& bob);

/// Wire cut; each side faces an emulated KLJN communicator with an
/// independent resistor choice and independent noise.
AttackOutcome mitm_resistor_bep(const HonestEnd& alice, const HonestEnd& bob,
                                const ScenarioConfig& scenario, const PhysicsConfig& physics,
                                const RngStream& eve_stream);

/// Wire cut; one noise current waveform drives both halves.
AttackOutcome twin_current_bep(const HonestEnd& alice, const HonestEnd& bob,
                               const ScenarioConfig& scenario, const PhysicsConfig& physics,
                               const RngStream& eve_stream);

/// Wire cut; one noise voltage waveform drives both halves, optionally with
/// a committed DC level per end.
AttackOutcome twin_voltage_bep(const HonestEnd& alice, const HonestEnd& bob,
                               const ScenarioConfig& scenario, const PhysicsConfig& physics,
                               const RngStream& eve_stream);

/// Intact wire with a zero-mean noise current injected at one point.
AttackOutcome injection_bep(const HonestEnd& alice, const HonestEnd& bob,
                            const ScenarioConfig& scenario, const PhysicsConfig& physics,
                            const RngStream& eve_stream);

/// Dispatches on scenario.variant.
AttackOutcome simulate_topology(const HonestEnd& alice, const HonestEnd& bob,
                                const ScenarioConfig& scenario, const PhysicsConfig& physics,
                                const RngStream& eve_stream);

/// Lower-resistance side from the injection cross-correlations. Larger
/// correlation toward Alice means Alice connected R_L, i.e. LH.
std::optional<State> eve_guess_state(const EveRecord& record, double threshold = 0.0);

}  // namespace kljn
