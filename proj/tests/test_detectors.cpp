#include "kljn/detectors.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace kljn;

TEST_CASE("instantaneous_compare: identical streams never flag")
{
    oracle::Gen g(1);
    const TimeSeries a(g.normals(100), Unit::volt);
    const auto v = instantaneous_compare(a, a, 1e-12);
    CHECK_FALSE(v.flagged);
    CHECK_FALSE(v.first_flag_index.has_value());
    CHECK(v.agreement_count == 100);
    CHECK(v.total_agreements == 100);
    CHECK(v.statistic == 0.0);
}

TEST_CASE("instantaneous_compare: first disagreement index")
{
    const TimeSeries a({0.0, 0.0, 0.0, 0.0, 0.0}, Unit::volt);
    const TimeSeries b({0.0, 0.05, 0.2, 0.0, 0.3}, Unit::volt);
    const auto v = instantaneous_compare(a, b, 0.1);
    CHECK(v.flagged);
    CHECK(v.first_flag_index == 2u);
    CHECK(v.agreement_count == 2);
    CHECK(v.total_agreements == 3);
    CHECK(v.statistic == doctest::Approx(0.3));
    CHECK(v.threshold == 0.1);
}

TEST_CASE("instantaneous_compare: joint channels need agreement on all")
{
    const TimeSeries a({0.0, 0.0, 0.0}, Unit::volt);
    const TimeSeries b({0.0, 0.0, 5.0}, Unit::volt);
    const TimeSeries c({0.0, 2.0, 0.0}, Unit::ampere);
    const CompareChannel chans[] = {{&a, &b, 1.0}, {&a, &c, 1.0}};
    const auto v = instantaneous_compare(chans);
    CHECK(v.first_flag_index == 1u);
    CHECK(v.total_agreements == 1);
}

TEST_CASE("instantaneous_compare: errors")
{
    const TimeSeries a({0.0, 1.0}, Unit::volt);
    const TimeSeries b({0.0}, Unit::volt);
    CHECK_THROWS_AS(instantaneous_compare(a, a, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(instantaneous_compare(a, a, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(instantaneous_compare(a, b, 1.0), std::invalid_argument);
}

TEST_CASE("ac_compare ignores a DC offset between the streams")
{
    oracle::Gen g(2);
    auto x = g.normals(200);
    auto y = x;
    for (auto& v : y)
        v += 7.0;
    const TimeSeries a(x, Unit::ampere), b(y, Unit::ampere);
    CHECK_FALSE(ac_compare(a, b, 1e-9).flagged);
    CHECK(instantaneous_compare(a, b, 1e-9).flagged);
}

TEST_CASE("property: raising epsilon never adds flags")
{
    oracle::Gen g(3);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = g.index(1, 100);
        const TimeSeries a(g.normals(n), Unit::volt), b(g.normals(n), Unit::volt);
        const double e1 = g.log_uniform(1e-3, 10), e2 = e1 * g.uniform(1, 10);
        const auto v1 = instantaneous_compare(a, b, e1);
        const auto v2 = instantaneous_compare(a, b, e2);
        CHECK(v2.total_agreements >= v1.total_agreements);
        CHECK(v2.agreement_count >= v1.agreement_count);
        if (!v1.flagged)
            CHECK_FALSE(v2.flagged);
    }
}

TEST_CASE("expected_dc matches the loop oracle for every state and side")
{
    const PartyConfig A{1e3, 1e4, 5e-3}, B{2e3, 3e4, -7e-3};
    for (Choice a : {Choice::L, Choice::H}) {
        for (Choice b : {Choice::L, Choice::H}) {
            const double RA = A.resistance(a), RB = B.resistance(b);
            const double i = oracle::loop_current(A.dc_volt, B.dc_volt, RA, RB);
            const double u = oracle::wire_voltage(A.dc_volt, B.dc_volt, RA, RB);
            CHECK(expected_dc(Side::alice, a, b, A, B, DcQuantity::current) == doctest::Approx(i));
            CHECK(expected_dc(Side::bob, b, a, A, B, DcQuantity::current) == doctest::Approx(i));
            CHECK(expected_dc(Side::alice, a, b, A, B, DcQuantity::voltage) == doctest::Approx(u));
            CHECK(expected_dc(Side::bob, b, a, A, B, DcQuantity::voltage) == doctest::Approx(u));
        }
    }
}

TEST_CASE("dc_average_test threshold")
{
    const TimeSeries ts = TimeSeries::constant(100, 1.0, Unit::volt);
    // threshold = 5 * 2 / sqrt(100) = 1
    auto v = dc_average_test(ts, 0.0, 2.0, 5.0);
    CHECK(v.threshold == doctest::Approx(1.0));
    CHECK(v.statistic == doctest::Approx(1.0));
    CHECK_FALSE(v.flagged);  // strictly greater is required
    v = dc_average_test(ts, -0.01, 2.0, 5.0);
    CHECK(v.flagged);
    CHECK(v.first_flag_index == 0u);
    CHECK_THROWS_AS(dc_average_test(ts, 0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dc_average_test(TimeSeries::constant(1, 0.0, Unit::volt), 0.0, 1.0, 5.0),
                    std::invalid_argument);
}

TEST_CASE("property: raising kappa never adds DC flags")
{
    oracle::Gen g(4);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = g.index(2, 200);
        const TimeSeries ts(g.normals(n), Unit::ampere);
        const double base = g.uniform(-0.5, 0.5);
        const double k1 = g.uniform(0.1, 5), k2 = k1 * g.uniform(1, 4);
        if (!dc_average_test(ts, base, 1.0, k1).flagged)
            CHECK_FALSE(dc_average_test(ts, base, 1.0, k2).flagged);
    }
}

TEST_CASE("dc_average_test false-alarm rate on pure noise")
{
    // P(|N(0,1)| > 3) = 0.0027
    std::size_t flags = 0;
    const std::size_t trials = 20'000;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto ts = gaussian_noise(RngStream(77).child(t), 1.0, 50);
        flags += dc_average_test(ts, 0.0, 1.0, 3.0).flagged ? 1 : 0;
    }
    const auto iv = wilson_interval(flags, trials, 4.0);
    CHECK(iv.contains(2.0 * (1.0 - oracle::normal_cdf(3.0))));
}

TEST_CASE("hidden_probability and per_sample_agreement")
{
    std::vector<DetectorVerdict> vs(4);
    vs[0].first_flag_index = 0;
    vs[1].first_flag_index = 3;
    vs[2].first_flag_index = 10;
    for (auto& v : vs) {
        v.length = 10;
        v.total_agreements = 5;
    }
    CHECK(hidden_probability(vs, 1).estimate == doctest::Approx(0.75));
    CHECK(hidden_probability(vs, 3).estimate == doctest::Approx(0.75));
    CHECK(hidden_probability(vs, 4).estimate == doctest::Approx(0.5));
    CHECK(hidden_probability(vs, 11).estimate == doctest::Approx(0.25));
    CHECK(per_sample_agreement(vs).estimate == doctest::Approx(0.5));
    CHECK_THROWS_AS(hidden_probability({}, 1), std::invalid_argument);
}
