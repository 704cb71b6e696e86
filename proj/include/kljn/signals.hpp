#pragma once

// Seeded random substreams, Gaussian noise synthesis and the elementary
// statistics every other module is built on.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace kljn {

enum class Unit { volt, ampere };

/// Uniformly sampled waveform covering one bit exchange period.
struct TimeSeries {
    std::vector<double> samples;
    Unit unit = Unit::volt;

    TimeSeries() = default;
    TimeSeries(std::vector<double> s, Unit u) : samples(std::move(s)), unit(u) {}
    static TimeSeries constant(std::size_t n, double value, Unit u)
    {
        return {std::vector<double>(n, value), u};
    }

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double operator[](std::size_t k) const { return samples[k]; }
    double& operator[](std::size_t k) { return samples[k]; }
    std::span<const double> view() const { return samples; }

    bool operator==(const TimeSeries&) const = default;
};

/// A node in a tree of independent random streams.
///
/// A stream is identified by a root seed plus a path of child indices. The
/// engine for a stream is derived from a SplitMix64 hash chain over the
/// path, so two streams with the same identity always reproduce the same
/// sequence and streams with different paths do not overlap in practice.
/// Streams are cheap values; every call to engine() starts from the
/// beginning of the stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t root_seed = 0, std::vector<std::uint64_t> path = {});

    RngStream child(std::uint64_t index) const;
    RngStream child(std::initializer_list<std::uint64_t> indices) const;

    std::mt19937_64 engine() const;

    std::uint64_t root_seed() const { return root_seed_; }
    const std::vector<std::uint64_t>& path() const { return path_; }

private:
    std::uint64_t root_seed_;
    std::vector<std::uint64_t> path_;
};

/// n i.i.d. zero-mean Gaussian samples of the given variance.
TimeSeries gaussian_noise(const RngStream& stream, double variance, std::size_t n,
                          Unit unit = Unit::volt);

double mean(std::span<const double> xs);
inline double mean(const TimeSeries& ts) { return mean(ts.view()); }

/// Population variance about the sample mean (the AC power).
double ac_variance(std::span<const double> xs);
inline double ac_variance(const TimeSeries& ts) { return ac_variance(ts.view()); }

/// Raw second moment (1/n) sum a_k b_k, no mean subtraction.
double cross_correlation(std::span<const double> a, std::span<const double> b);
inline double cross_correlation(const TimeSeries& a, const TimeSeries& b)
{
    return cross_correlation(a.view(), b.view());
}

/// Point estimate with a two-sided confidence interval.
struct Interval {
    double estimate = 0.0;
    double low = 0.0;
    double high = 0.0;

    bool contains(double x) const { return low <= x && x <= high; }
    bool overlaps(double lo, double hi) const { return low <= hi && lo <= high; }
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for successes/trials.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

/// Normal-approximation interval for the mean of xs.
Interval mean_interval(std::span<const double> xs, double z = kZ95);

}  // namespace kljn
