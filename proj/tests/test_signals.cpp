#include "kljn/signals.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace kljn;

TEST_CASE("same stream identity reproduces the same sequence")
{
    RngStream a(42, {3, 1});
    RngStream b = RngStream(42).child(3).child(1);
    CHECK(gaussian_noise(a, 1.0, 64) == gaussian_noise(b, 1.0, 64));
    CHECK(RngStream(42).child({3, 1}).path() == std::vector<std::uint64_t>{3, 1});
}

TEST_CASE("different seeds, siblings and depths give different sequences")
{
    const RngStream root(7);
    std::set<std::vector<double>> seen;
    for (const auto& s : {root, root.child(0), root.child(1), root.child({0, 0}), RngStream(8),
                          RngStream(8).child(0)})
        seen.insert(gaussian_noise(s, 1.0, 16).samples);
    CHECK(seen.size() == 6);
}

TEST_CASE("gaussian_noise: moments")
{
    const auto x = gaussian_noise(RngStream(1), 4.0, 200'000);
    CHECK(x.size() == 200'000);
    CHECK(std::abs(mean(x)) < 5.0 * 2.0 / std::sqrt(2e5));
    // sd of the sample variance is sigma^2 sqrt(2/n)
    CHECK(std::abs(ac_variance(x) - 4.0) < 5.0 * 4.0 * std::sqrt(2.0 / 2e5));
}

TEST_CASE("gaussian_noise: unit, zero variance and errors")
{
    const auto a = gaussian_noise(RngStream(1), 1.0, 4, Unit::ampere);
    CHECK(a.unit == Unit::ampere);
    const auto z = gaussian_noise(RngStream(1), 0.0, 5);
    CHECK(z.samples == std::vector<double>(5, 0.0));
    CHECK_THROWS_AS(gaussian_noise(RngStream(1), -1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_noise(RngStream(1), NAN, 5), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_noise(RngStream(1), 1.0, 0), std::invalid_argument);
}

TEST_CASE("gaussian_noise is normal: KS against a reference normal sample")
{
    const auto x = gaussian_noise(RngStream(99), 1.0, 20'000);
    oracle::Gen g(5);
    const auto ref = g.normals(20'000);
    const double d = oracle::ks_statistic(x.samples, ref);
    CHECK(oracle::ks_p_value(d, x.size(), ref.size()) > 1e-3);
}

TEST_CASE("statistics: hand-computed values")
{
    const std::vector<double> xs{1, 2, 3, 4};
    CHECK(mean(xs) == doctest::Approx(2.5));
    CHECK(ac_variance(xs) == doctest::Approx(1.25));
    const std::vector<double> ys{2, 0, -1, 1};
    CHECK(cross_correlation(xs, ys) == doctest::Approx((2 + 0 - 3 + 4) / 4.0));
    CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(ac_variance(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(cross_correlation(xs, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("property: cross_correlation is bilinear and symmetric")
{
    oracle::Gen g(11);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = g.index(1, 300);
        const auto a = g.normals(n), b = g.normals(n), c = g.normals(n);
        const double s = g.uniform(-3, 3), t = g.uniform(-3, 3);
        std::vector<double> comb(n);
        for (std::size_t k = 0; k < n; ++k)
            comb[k] = s * a[k] + t * b[k];
        const double lhs = cross_correlation(comb, c);
        const double rhs = s * cross_correlation(a, c) + t * cross_correlation(b, c);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
        CHECK(cross_correlation(a, b) == doctest::Approx(cross_correlation(b, a)));
    }
}

TEST_CASE("property: variance scales quadratically and ignores offsets")
{
    oracle::Gen g(12);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = g.index(2, 200);
        auto x = g.normals(n);
        const double c = g.uniform(-10, 10), s = g.uniform(0.1, 10);
        std::vector<double> y(n);
        for (std::size_t k = 0; k < n; ++k)
            y[k] = s * x[k] + c;
        CHECK(ac_variance(y) == doctest::Approx(s * s * ac_variance(x)).epsilon(1e-9));
    }
}

TEST_CASE("property: sibling substreams are uncorrelated")
{
    const RngStream root(2024);
    const std::size_t n = 1'000'000;
    for (std::uint64_t i = 0; i < 4; ++i) {
        const auto a = gaussian_noise(root.child(i), 1.0, n);
        const auto b = gaussian_noise(root.child(i + 1), 1.0, n);
        // sd of the sample correlation of independent unit normals is 1/sqrt(n)
        CHECK(std::abs(cross_correlation(a, b)) < 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("wilson_interval")
{
    SUBCASE("zero successes")
    {
        const auto iv = wilson_interval(0, 10);
        const double z2 = kZ95 * kZ95;
        CHECK(iv.estimate == 0.0);
        CHECK(iv.low == 0.0);
        CHECK(iv.high == doctest::Approx(z2 / (10 + z2)));
    }
    SUBCASE("all successes mirror zero successes")
    {
        const auto a = wilson_interval(0, 25), b = wilson_interval(25, 25);
        CHECK(b.low == doctest::Approx(1.0 - a.high));
        CHECK(b.high == 1.0);
    }
    SUBCASE("interior point")
    {
        const auto iv = wilson_interval(50, 100);
        CHECK(iv.estimate == 0.5);
        CHECK(iv.contains(0.5));
        CHECK(iv.low == doctest::Approx(0.4038).epsilon(1e-3));
    }
    CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(3, 2), std::invalid_argument);
}

TEST_CASE("mean_interval")
{
    const std::vector<double> xs{1, 2, 3, 4, 5};
    const auto iv = mean_interval(xs);
    CHECK(iv.estimate == 3.0);
    // sample sd sqrt(2.5)
    CHECK(iv.high - iv.estimate == doctest::Approx(kZ95 * std::sqrt(2.5 / 5.0)));
    CHECK(iv.overlaps(4.0, 9.0));
    CHECK_FALSE(iv.overlaps(10.0, 11.0));
}
