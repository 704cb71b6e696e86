#include "kljn/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kljn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require_nonempty(std::span<const double> xs, const char* what)
{
    if (xs.empty())
        throw std::invalid_argument(std::string(what) + ": empty series");
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::vector<std::uint64_t> path)
    : root_seed_(root_seed), path_(std::move(path))
{
}

RngStream RngStream::child(std::uint64_t index) const
{
    auto p = path_;
    p.push_back(index);
    return RngStream(root_seed_, std::move(p));
}

RngStream RngStream::child(std::initializer_list<std::uint64_t> indices) const
{
    auto p = path_;
    p.insert(p.end(), indices.begin(), indices.end());
    return RngStream(root_seed_, std::move(p));
}

std::mt19937_64 RngStream::engine() const
{
    // Hash chain: each path element is folded into the state together with
    // the depth, so [1, 0] and [1] map to different keys.
    std::uint64_t state = root_seed_;
    std::uint64_t key = splitmix64(state);
    for (std::size_t depth = 0; depth < path_.size(); ++depth) {
        state = key ^ (path_[depth] + 0x632be59bd9b4e019ULL * (depth + 1));
        key = splitmix64(state);
    }

    std::array<std::uint32_t, 8> words{};
    std::uint64_t expand = key;
    for (std::size_t w = 0; w < words.size(); w += 2) {
        std::uint64_t v = splitmix64(expand);
        words[w] = static_cast<std::uint32_t>(v);
        words[w + 1] = static_cast<std::uint32_t>(v >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

TimeSeries gaussian_noise(const RngStream& stream, double variance, std::size_t n, Unit unit)
{
    if (!(variance >= 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("gaussian_noise: variance must be finite and >= 0");
    if (n == 0)
        throw std::invalid_argument("gaussian_noise: n must be >= 1");

    std::vector<double> out(n, 0.0);
    if (variance == 0.0)
        return {std::move(out), unit};

    auto eng = stream.engine();
    std::normal_distribution<double> dist(0.0, std::sqrt(variance));
    for (auto& x : out)
        x = dist(eng);
    return {std::move(out), unit};
}

double mean(std::span<const double> xs)
{
    require_nonempty(xs, "mean");
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

double ac_variance(std::span<const double> xs)
{
    if (xs.size() < 2)
        throw std::invalid_argument("ac_variance: need at least 2 samples");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) {
        const double d = x - m;
        s += d * d;
    }
    return s / static_cast<double>(xs.size());
}

double cross_correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("cross_correlation: length mismatch");
    require_nonempty(a, "cross_correlation");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * b[k];
    return s / static_cast<double>(a.size());
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z)
{
    if (trials == 0)
        throw std::invalid_argument("wilson_interval: zero trials");
    if (successes > trials)
        throw std::invalid_argument("wilson_interval: successes > trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // Clamp so the interval always contains the point estimate despite rounding.
    return {p, std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

Interval mean_interval(std::span<const double> xs, double z)
{
    const double m = mean(xs);
    if (xs.size() < 2)
        return {m, m, m};
    double s = 0.0;
    for (double x : xs)
        s += (x - m) * (x - m);
    const double sd = std::sqrt(s / static_cast<double>(xs.size() - 1));
    const double half = z * sd / std::sqrt(static_cast<double>(xs.size()));
    return {m, m - half, m + half};
}

}  // namespace kljn
