#include "kljn/detectors.hpp"

#include "kljn/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kljn {

DetectorVerdict instantaneous_compare(std::span<const CompareChannel> channels)
{
    if (channels.empty())
        throw std::invalid_argument("instantaneous_compare: no channels");
    const std::size_t n = channels.front().a->size();
    double smallest_eps = channels.front().epsilon;
    for (const auto& ch : channels) {
        if (ch.a->size() != n || ch.b->size() != n)
            throw std::invalid_argument("instantaneous_compare: length mismatch");
        if (!(ch.epsilon > 0.0))
            throw std::invalid_argument("instantaneous_compare: epsilon must be > 0");
        smallest_eps = std::min(smallest_eps, ch.epsilon);
    }

    DetectorVerdict v;
    v.length = n;
    v.threshold = smallest_eps;
    v.agreement_count = n;
    for (std::size_t k = 0; k < n; ++k) {
        bool agree = true;
        for (const auto& ch : channels) {
            const double d = std::abs((*ch.a)[k] - (*ch.b)[k]);
            // Statistic in units of each channel's own tolerance, rescaled
            // to the smallest one so single-channel calls report raw |diff|.
            v.statistic = std::max(v.statistic, d / ch.epsilon * smallest_eps);
            if (d > ch.epsilon)
                agree = false;
        }
        if (agree) {
            ++v.total_agreements;
        } else if (!v.flagged) {
            v.flagged = true;
            v.first_flag_index = k;
            v.agreement_count = k;
        }
    }
    return v;
}

DetectorVerdict instantaneous_compare(const TimeSeries& ts_A, const TimeSeries& ts_B,
                                      double epsilon)
{
    const CompareChannel ch{&ts_A, &ts_B, epsilon};
    return instantaneous_compare(std::span<const CompareChannel>(&ch, 1));
}

DetectorVerdict ac_compare(const TimeSeries& ts_A, const TimeSeries& ts_B, double epsilon)
{
    if (ts_A.size() != ts_B.size())
        throw std::invalid_argument("ac_compare: length mismatch");
    if (ts_A.empty())
        throw std::invalid_argument("ac_compare: empty series");
    auto strip = [](const TimeSeries& ts) {
        TimeSeries out = ts;
        const double m = mean(ts);
        for (auto& x : out.samples)
            x -= m;
        return out;
    };
    return instantaneous_compare(strip(ts_A), strip(ts_B), epsilon);
}

double expected_dc(Side own_side, Choice own, Choice partner, const PartyConfig& alice,
                   const PartyConfig& bob, DcQuantity quantity)
{
    const Choice a = own_side == Side::alice ? own : partner;
    const Choice b = own_side == Side::alice ? partner : own;
    const double R_A = alice.resistance(a);
    const double R_B = bob.resistance(b);
    return quantity == DcQuantity::current ? dc_loop_current(alice.dc_volt, bob.dc_volt, R_A, R_B)
                                           : dc_wire_voltage(alice.dc_volt, bob.dc_volt, R_A, R_B);
}

DetectorVerdict dc_average_test(const TimeSeries& ts, double baseline, double ac_rms,
                                double kappa)
{
    if (ts.size() < 2)
        throw std::invalid_argument("dc_average_test: need at least 2 samples");
    if (!(ac_rms >= 0.0) || !(kappa > 0.0) || !std::isfinite(baseline))
        throw std::invalid_argument("dc_average_test: invalid parameters");

    DetectorVerdict v;
    v.length = ts.size();
    v.statistic = std::abs(mean(ts) - baseline);
    v.threshold = kappa * ac_rms / std::sqrt(static_cast<double>(ts.size()));
    v.flagged = v.statistic > v.threshold;
    v.agreement_count = v.flagged ? 0 : ts.size();
    if (v.flagged)
        v.first_flag_index = 0;
    return v;
}

Interval hidden_probability(std::span<const DetectorVerdict> verdicts, std::size_t horizon_n)
{
    if (verdicts.empty())
        throw std::invalid_argument("hidden_probability: no verdicts");
    std::size_t hidden = 0;
    for (const auto& v : verdicts) {
        if (!v.first_flag_index || *v.first_flag_index >= horizon_n)
            ++hidden;
    }
    return wilson_interval(hidden, verdicts.size());
}

Interval per_sample_agreement(std::span<const DetectorVerdict> verdicts)
{
    if (verdicts.empty())
        throw std::invalid_argument("per_sample_agreement: no verdicts");
    std::size_t agree = 0;
    std::size_t total = 0;
    for (const auto& v : verdicts) {
        agree += v.total_agreements;
        total += v.length;
    }
    return wilson_interval(agree, total);
}

}  // namespace kljn
