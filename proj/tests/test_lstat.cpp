#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "robmom/lstat.hpp"

using namespace robmom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> one_to(int n)
{
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 1.0);
    return v;
}

} // namespace

TEST_CASE("trimmed mean under the window convention", "[lstat]")
{
    CHECK_THAT(trimmed_mean(one_to(10), {0.1, 1.0}), WithinAbs(5.5, 1e-15));
    CHECK(trimmed_mean(std::vector<double>{1, 2, 3}, {1.0 / 3.0, 1.0}) == 2.0);
    const std::vector<double> s{-1.5, 0.25, 2.0, 9.0};
    for (double g : {0.0, 0.5, 1.0, 3.0}) CHECK_THAT(trimmed_mean(s, {0.0, g}), WithinRel(2.4375, 1e-15));

    const TrimWindow w = trim_window(10, {0.1, 1.0});
    CHECK(w.first == 1);
    CHECK(w.last == 9);
    // asymmetric: lower trim gamma * eps0
    const TrimWindow a = trim_window(100, {0.1, 0.5});
    CHECK(a.first == 5);
    CHECK(a.last == 90);
}

TEST_CASE("trimmed mean errors", "[lstat]")
{
    CHECK_THROWS_AS(trimmed_mean(std::vector<double>{3, 1, 2}, {}), ContractViolation);
    CHECK_THROWS_AS(trimmed_mean(std::vector<double>{1, 2}, {0.4, 1.0}), DegenerateError);
    CHECK_THROWS_AS(trimmed_mean(std::vector<double>{}, {}), DegenerateError);
    CHECK_THROWS_AS(trimmed_mean(one_to(10), {0.5, 1.0}), ArgumentError);
    CHECK_THROWS_AS(trimmed_mean(one_to(10), {-0.1, 1.0}), ArgumentError);
    CHECK_THROWS_AS(trimmed_mean(one_to(10), {0.1, -1.0}), ArgumentError);
}

TEST_CASE("median of sorted input", "[lstat]")
{
    CHECK(median_sorted(std::vector<double>{1, 2, 3}) == 2.0);
    CHECK(median_sorted(std::vector<double>{1, 2, 3, 4}) == 2.5);
    CHECK(median_sorted(std::vector<double>{5}) == 5.0);
    CHECK_THROWS_AS(median_sorted(std::vector<double>{}), ArgumentError);
    CHECK_THROWS_AS(median_sorted(std::vector<double>{2, 1}), ContractViolation);
}

TEST_CASE("L-estimator dispatch", "[lstat]")
{
    CHECK_THAT(apply(LEstimatorSpec::trimmed_mean(), one_to(10), {0.1, 1.0}), WithinAbs(5.5, 1e-15));
    CHECK(apply(LEstimatorSpec::median(), std::vector<double>{1, 2, 100}, {}) == 2.0);

    const auto uniform = LEstimatorSpec::weighted([](std::size_t, std::size_t m) { return 1.0 / static_cast<double>(m); });
    std::mt19937_64 eng(3);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> s(37);
        for (auto& v : s) v = nd(eng);
        std::sort(s.begin(), s.end());
        const TrimSpec t{0.1, 0.7};
        CHECK_THAT(apply(uniform, s, t), WithinAbs(apply(LEstimatorSpec::trimmed_mean(), s, t), 1e-14));
    }

    const auto bad = LEstimatorSpec::weighted([](std::size_t, std::size_t) { return 0.5; });
    CHECK_THROWS_AS(apply(bad, one_to(10), {}), ConfigError);
    const auto negative =
        LEstimatorSpec::weighted([](std::size_t i, std::size_t m) { return i == 0 ? -1.0 : 2.0 / static_cast<double>(m - 1); });
    CHECK_THROWS_AS(apply(negative, one_to(10), {}), ConfigError);
    CHECK_THROWS_AS(apply(LEstimatorSpec{LKind::WeightedScheme, {}}, one_to(10), {}), ConfigError);
}

TEST_CASE("breakdown map", "[lstat]")
{
    CHECK_THAT(breakdown_from_block(0.19, 2), WithinAbs(0.1, 1e-15));
    CHECK_THAT(breakdown_from_block(0.271, 3), WithinAbs(0.1, 1e-15));
    for (int k = 1; k <= 12; ++k) CHECK(breakdown_from_block(0.0, k) == 0.0);
    CHECK_THROWS_AS(breakdown_from_block(1.0, 2), ArgumentError);
    CHECK_THROWS_AS(breakdown_from_block(-0.1, 2), ArgumentError);
    CHECK_THROWS_AS(breakdown_from_block(0.1, 0), ArgumentError);
}

TEST_CASE("breakdown map round-trips", "[lstat][property]")
{
    for (int k = 1; k <= 12; ++k)
        for (double e0 = 0.0; e0 < 0.95; e0 += 0.0137) {
            const double eps = breakdown_from_block(e0, k);
            CHECK(eps >= 0.0);
            CHECK(eps < 1.0);
            CHECK(std::abs(block_from_breakdown(eps, k) - e0) <= 1e-14);
        }
}

TEST_CASE("L-estimators are affine equivariant for positive scale", "[lstat][property]")
{
    std::mt19937_64 eng(4);
    std::uniform_real_distribution<double> u(-5.0, 5.0), ul(0.1, 4.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> s(5 + rep % 40);
        for (auto& v : s) v = u(eng);
        std::sort(s.begin(), s.end());
        const double lambda = ul(eng), mu = u(eng);
        std::vector<double> t(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) t[i] = lambda * s[i] + mu;
        const TrimSpec trim{0.05 * (rep % 5), 0.5 + 0.25 * (rep % 3)};
        for (const auto& spec : {LEstimatorSpec::trimmed_mean(), LEstimatorSpec::median()}) {
            const double a = apply(spec, s, trim), b = apply(spec, t, trim);
            CHECK(std::abs(b - (lambda * a + mu)) <= 1e-12 * (std::abs(b) + lambda * 5.0));
        }
    }
}

TEST_CASE("window size and untrimmed mean", "[lstat][property]")
{
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.0, 0.45), ug(0.0, 1.2);
    for (int rep = 0; rep < 2000; ++rep) {
        const std::size_t n = 1 + rep % 500;
        const TrimSpec t{u(eng), ug(eng)};
        const TrimWindow w = trim_window(n, t);
        const double N = static_cast<double>(n);
        const auto lo = static_cast<std::ptrdiff_t>(std::ceil(N * t.gamma * t.eps0));
        const auto hi = static_cast<std::ptrdiff_t>(std::floor(N * (1.0 - t.eps0)));
        CHECK(static_cast<std::ptrdiff_t>(w.size()) == std::max<std::ptrdiff_t>(0, hi - lo));
    }
    std::normal_distribution<double> nd(3.0, 2.0);
    std::vector<double> s(1000);
    for (auto& v : s) v = nd(eng);
    std::sort(s.begin(), s.end());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / 1000.0;
    CHECK_THAT(trimmed_mean(s, {}), WithinRel(mean, 1e-13));
}
