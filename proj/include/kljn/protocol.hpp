#pragma once

// The honest KLJN state machine: resistor selection, measurement,
// partner classification, bit extraction and the detectors run over the
// authenticated public channel.

#include "kljn/attacks.hpp"
#include "kljn/detectors.hpp"
#include "kljn/model.hpp"
#include "kljn/signals.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kljn {

/// Which detectors may abort a key exchange.
struct DetectorSet {
    bool instant = true;
    bool dc = true;
    bool ac = true;
};

struct DetectorConfig {
    /// Comparison tolerance relative to the rms of the compared readings.
    /// Unset: 5 * measurement_noise_rms (absolute) when that is nonzero,
    /// otherwise 1e-9 relative.
    std::optional<double> epsilon;
    double kappa = 5.0;
    DetectorSet abort_on;

    void validate() const;
};

inline constexpr double kDefaultRelativeEpsilon = 1e-9;

Choice select_resistor(const RngStream& stream);

/// Nearest hypothesis in the log domain for the partner's resistor, from
/// the AC loop-current variance D / (own_R + R_partner).
Choice classify_partner(double own_R, double measured_i_variance, const PartyConfig& partner,
                        const PhysicsConfig& physics);

/// Same decision from the AC wire-voltage variance D own_R R_p / (own_R + R_p).
Choice classify_partner_from_voltage(double own_R, double measured_u_variance,
                                     const PartyConfig& partner, const PhysicsConfig& physics);

struct Classification {
    Choice partner = Choice::L;
    /// True when the current variance exceeded what any passive partner can
    /// produce (D / own_R) and the voltage variance decided instead.
    bool from_voltage = false;
};

Classification classify_end(double own_R, double i_variance, double u_variance,
                            const PartyConfig& partner, const PhysicsConfig& physics);

/// HL -> 0, LH -> 1, equal pairs carry no bit.
std::optional<int> bit_from_state(Choice alice, Choice bob);

/// One party's statistics of its own (internal, noise-free) readings.
struct EndMeasurement {
    double mean_i = 0.0;
    double mean_u = 0.0;
    double var_i = 0.0;
    double var_u = 0.0;
};

struct BepDetection {
    DetectorVerdict instant;     ///< joint current + voltage comparison
    DetectorVerdict ac;          ///< AC current comparison
    DetectorVerdict dc_alice_i;
    DetectorVerdict dc_alice_u;
    DetectorVerdict dc_bob_i;
    DetectorVerdict dc_bob_u;
    double epsilon_i = 0.0;
    double epsilon_u = 0.0;
    /// |DC shift| above the AC rms itself (single-sample averaging).
    bool wide_margin_alice = false;
    bool wide_margin_bob = false;

    bool flag_dc_alice() const { return dc_alice_i.flagged || dc_alice_u.flagged; }
    bool flag_dc_bob() const { return dc_bob_i.flagged || dc_bob_u.flagged; }
    bool flag_dc() const { return flag_dc_alice() || flag_dc_bob(); }
    bool any(const DetectorSet& set) const
    {
        return (set.instant && instant.flagged) || (set.dc && flag_dc()) ||
               (set.ac && ac.flagged);
    }
};

struct BepRecord {
    Choice alice_choice = Choice::L;
    Choice bob_choice = Choice::L;
    State state = State::LL;
    bool secure = false;
    Classification alice_classified;
    Classification bob_classified;
    std::optional<int> alice_bit;
    std::optional<int> bob_bit;
    EndMeasurement alice_meas;
    EndMeasurement bob_meas;
    EndView alice_view;
    EndView bob_view;
    BepDetection detection;
    bool aborted = false;  ///< some abort_on detector flagged
    EveRecord eve;
    double alice_loop_ohm = 0.0;
    double bob_loop_ohm = 0.0;

    /// Releases the waveforms; everything else stays valid.
    void drop_waveforms();
};

// Substreams of one BEP.
enum BepStream : std::uint64_t {
    kAliceChoice = 0,
    kBobChoice = 1,
    kAliceNoise = 2,
    kBobNoise = 3,
    kEve = 4,
    kAliceReport = 5,
    kBobReport = 6,
};

struct Parties {
    PartyConfig alice;
    PartyConfig bob;
};

BepRecord run_bep(const Parties& parties, const ScenarioConfig& scenario,
                  const PhysicsConfig& physics, const DetectorConfig& detectors,
                  const RngStream& bep_stream);

struct KeyRecord {
    std::vector<BepRecord> beps;  ///< waveforms dropped unless requested
    std::vector<int> alice_key;
    std::vector<int> bob_key;
    bool aborted = false;
    std::optional<std::size_t> abort_bep;
    /// BEPs in which Eve committed a secure emulation, up to and including
    /// the aborting one.
    std::size_t secure_emulations = 0;
    bool complete = false;
};

/// Runs BEPs (substream j for BEP j) until target_bits bits are shared or a
/// detector in abort_on flags. Gives up after max_beps without aborting.
KeyRecord exchange_key(std::size_t target_bits, const Parties& parties,
                       const ScenarioConfig& scenario, const PhysicsConfig& physics,
                       const DetectorConfig& detectors, const RngStream& stream,
                       bool keep_waveforms = false, std::size_t max_beps = 0);

}  // namespace kljn
