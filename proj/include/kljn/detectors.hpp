#pragma once

// The defenses: instantaneous comparison over the authenticated channel,
// the DC time-average test and comparison of AC components.

#include "kljn/model.hpp"
#include "kljn/signals.hpp"

#include <optional>
#include <span>
#include <vector>

namespace kljn {

struct DetectorVerdict {
    bool flagged = false;
    std::optional<std::size_t> first_flag_index;
    double statistic = 0.0;
    double threshold = 0.0;
    /// Samples that agreed before the first flag (n when never flagged).
    std::size_t agreement_count = 0;
    /// Samples that agreed over the whole series, flagged or not.
    std::size_t total_agreements = 0;
    std::size_t length = 0;
};

/// One pair of readings compared under its own tolerance.
struct CompareChannel {
    const TimeSeries* a;
    const TimeSeries* b;
    double epsilon;
};

/// Flags the first sample with |a[k] - b[k]| > epsilon. statistic is the
/// largest observed |a[k] - b[k]|.
DetectorVerdict instantaneous_compare(const TimeSeries& ts_A, const TimeSeries& ts_B,
                                      double epsilon);

/// Joint comparison: a sample agrees only if every channel agrees.
DetectorVerdict instantaneous_compare(std::span<const CompareChannel> channels);

/// instantaneous_compare after removing each series' own sample mean.
DetectorVerdict ac_compare(const TimeSeries& ts_A, const TimeSeries& ts_B, double epsilon);

enum class DcQuantity { current, voltage };

/// No-attack DC baseline for the resistor pair implied by (own, partner).
double expected_dc(Side own_side, Choice own, Choice partner, const PartyConfig& alice,
                   const PartyConfig& bob, DcQuantity quantity);

/// |mean(ts) - baseline| against kappa * ac_rms / sqrt(n).
DetectorVerdict dc_average_test(const TimeSeries& ts, double baseline, double ac_rms,
                                double kappa);

/// Fraction of trials still unflagged after horizon_n samples.
Interval hidden_probability(std::span<const DetectorVerdict> verdicts, std::size_t horizon_n);

/// Pooled per-sample agreement fraction over all samples of all verdicts.
Interval per_sample_agreement(std::span<const DetectorVerdict> verdicts);

}  // namespace kljn
