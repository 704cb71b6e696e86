#pragma once

// Monte Carlo runner: repeats BEPs or whole key exchanges over a scenario,
// aggregates the detector outcomes and fits the hidden-probability decay.
//
// Trial t always draws from substream t of the run's root stream, so the
// report is a deterministic function of (experiment, settings) and the
// number of worker threads does not change a single bit of it.

#include "kljn/protocol.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kljn {

struct Experiment {
    Parties parties;
    PhysicsConfig physics;
    ScenarioConfig scenario;
    DetectorConfig detectors;

    void validate() const;
};

enum class RunMode { bep, key };

struct RunSettings {
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::size_t target_bits = 128;
    std::vector<std::size_t> horizons{1, 2, 5, 10, 20};
    RunMode mode = RunMode::bep;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

/// Compact per-BEP outcome; one row of report.csv.
struct BepSummary {
    std::size_t trial = 0;
    std::size_t bep_index = 0;
    Choice alice_choice = Choice::L;
    Choice bob_choice = Choice::L;
    State state = State::LL;
    bool secure = false;
    Choice alice_classified = Choice::L;
    Choice bob_classified = Choice::L;
    std::optional<int> alice_bit;
    std::optional<int> bob_bit;
    bool flag_instant = false;
    bool flag_dc_alice = false;
    bool flag_dc_bob = false;
    bool flag_ac = false;
    bool aborted = false;
    bool wide_margin = false;
    DetectorVerdict instant;
    double mean_i_alice = 0.0;
    double mean_i_bob = 0.0;
    double var_i_alice = 0.0;
    std::optional<double> corr_toward_A;
    std::optional<double> corr_toward_B;
    std::optional<State> eve_guess;
    bool secure_emulation = false;
    double alice_loop_ohm = 0.0;
    double bob_loop_ohm = 0.0;

    /// Whether the parties' classifications match the resistor actually
    /// connected at the far end of the wire.
    bool misclassified() const
    {
        return alice_classified != bob_choice || bob_classified != alice_choice;
    }
    bool bits_disagree() const
    {
        return (alice_bit || bob_bit) && alice_bit != bob_bit;
    }
    std::string stratum() const;
};

BepSummary summarize(const BepRecord& rec, std::size_t trial, std::size_t bep_index);

/// Exact counts; merging is associative and commutative.
struct Tally {
    std::size_t beps = 0;
    std::size_t detected = 0;
    std::size_t instant = 0;
    std::size_t dc = 0;
    std::size_t ac = 0;
    std::size_t wide_margin = 0;
    std::size_t secure = 0;
    std::size_t misclassified = 0;
    std::size_t bit_beps = 0;
    std::size_t bit_errors = 0;
    std::size_t eve_secure = 0;
    std::size_t eve_correct = 0;

    void add(const BepSummary& row);
    void merge(const Tally& other);
    bool operator==(const Tally&) const = default;
};

struct HiddenPoint {
    std::size_t horizon = 0;
    Interval hidden;
};

struct DecayFit {
    double p = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Least squares of ln(estimate) against horizon over points with an
/// estimate strictly inside (0, 1); p = exp(slope).
DecayFit fit_exponential_decay(std::span<const HiddenPoint> curve);

std::vector<HiddenPoint> hidden_curve(std::span<const DetectorVerdict> verdicts,
                                      std::span<const std::size_t> horizons);

struct StratumReport {
    std::string key;  ///< "<Alice R>:<Alice loop ohms>|<Bob loop ohms>:<Bob R>"
    std::size_t trials = 0;
    Interval agreement;
    std::vector<HiddenPoint> curve;
    std::optional<DecayFit> fit;
};

struct KeySummary {
    bool aborted = false;
    bool complete = false;
    std::size_t beps = 0;
    std::size_t secure_emulations = 0;
    std::size_t key_bits = 0;
    bool keys_agree = true;
};

struct DetectionReport {
    ScenarioConfig scenario;
    RunMode mode = RunMode::bep;
    std::size_t trials = 0;
    Tally tally;

    Interval detection_rate;
    Interval instant_rate;
    Interval dc_rate;
    Interval ac_rate;
    Interval wide_margin_rate;
    Interval secure_fraction;
    Interval misclassification_rate;
    Interval honest_ber;

    std::vector<HiddenPoint> hidden_curve;
    Interval per_sample_agreement;
    std::optional<DecayFit> fit;
    std::vector<StratumReport> strata;

    std::optional<Interval> eve_accuracy;
    std::optional<double> mean_corr_toward_A;
    std::optional<double> mean_corr_toward_B;

    // Key-exchange mode.
    std::vector<KeySummary> keys;
    std::optional<Interval> abort_rate;
    std::optional<Interval> key_agreement;
    std::optional<Interval> mean_secure_beps_to_detection;
    /// Per aborted run, secure-emulation BEPs up to detection.
    std::vector<std::size_t> secure_beps_to_detection;

    std::vector<BepSummary> rows;
    double wall_seconds = 0.0;
};

DetectionReport run_monte_carlo(const Experiment& experiment, const RunSettings& settings);
DetectionReport run_monte_carlo(const Experiment& experiment, const RunSettings& settings,
                                const RngStream& root);

/// Aggregates rows (and key summaries) into a report. Exposed for tests.
DetectionReport aggregate(const Experiment& experiment, const RunSettings& settings,
                          std::vector<BepSummary> rows, std::vector<KeySummary> keys);

enum class SweepParameter { dc_gap, injection_rms, samples_per_bep, epsilon, kappa };

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

/// dc_gap sets U_DCA = +gap/2, U_DCB = -gap/2.
Experiment with_parameter(Experiment experiment, SweepParameter parameter, double value);

/// One report per value; value i runs on substream i of the base seed.
std::vector<DetectionReport> sweep(const Experiment& base, const RunSettings& settings,
                                   SweepParameter parameter, std::span<const double> values);
std::vector<DetectionReport> sweep(const Experiment& base, const RunSettings& settings,
                                   std::string_view parameter, std::span<const double> values);

}  // namespace kljn
