#pragma once

// Independent reference formulas and helpers for the test suites. Nothing
// here calls into the library's solvers: each value is derived directly
// from Kirchhoff's laws for the two-resistor loop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Intact loop driven by voltage sources e_A (series R_A) and e_B (series R_B).
inline double loop_current(double e_A, double e_B, double R_A, double R_B)
{
    return (e_A - e_B) / (R_A + R_B);
}
inline double wire_voltage(double e_A, double e_B, double R_A, double R_B)
{
    // Voltage divider seen from the wire: weighted by the opposite resistor.
    return (e_A * R_B + e_B * R_A) / (R_A + R_B);
}

// Second moments for independent noise sources of variance D*R.
inline double loop_current_variance(double D, double R_A, double R_B)
{
    return (D * R_A + D * R_B) / ((R_A + R_B) * (R_A + R_B));
}
inline double wire_voltage_variance(double D, double R_A, double R_B)
{
    const double wa = R_B / (R_A + R_B);
    const double wb = R_A / (R_A + R_B);
    return wa * wa * D * R_A + wb * wb * D * R_B;
}

// Node between the two branches with current i_inj forced into it.
struct Node {
    double u;
    double i_A;  // Alice branch toward node
    double i_B;  // node toward Bob branch
};
inline Node injected_node(double e_A, double e_B, double R_A, double R_B, double i_inj)
{
    const double u = (e_A / R_A + e_B / R_B + i_inj) / (1.0 / R_A + 1.0 / R_B);
    return {u, (e_A - u) / R_A, (u - e_B) / R_B};
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Asymptotic p-value, Q_KS(sqrt(n_e) D) with the Stephens correction.
inline double ks_p_value(double d, std::size_t n_a, std::size_t n_b)
{
    const double ne = static_cast<double>(n_a) * n_b / (n_a + n_b);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lambda < 0.2)
        return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12)
            break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    /// Log-uniform, for resistances and scales spanning decades.
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    std::size_t index(std::size_t lo, std::size_t hi)
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
    }
    std::uint64_t u64() { return eng_(); }
    bool coin() { return (eng_() >> 63) != 0; }
    std::vector<double> normals(std::size_t n, double sd = 1.0)
    {
        std::normal_distribution<double> nd(0.0, sd);
        std::vector<double> out(n);
        for (auto& x : out)
            x = nd(eng_);
        return out;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace oracle
