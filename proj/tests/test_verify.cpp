#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "robmom/verify.hpp"

using namespace robmom;
using Catch::Matchers::WithinAbs;

namespace {

std::uint64_t total(const std::vector<std::uint64_t>& c) { return std::accumulate(c.begin(), c.end(), std::uint64_t{0}); }

} // namespace

TEST_CASE("histogram construction", "[verify]")
{
    const Histogram h = make_histogram({0.0, 0.1, 0.5, 0.99, 1.0}, 0.0, 1.0, 4);
    CHECK(h.counts == std::vector<std::uint64_t>{2, 0, 1, 2});
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(default_bin_count(1'000'000) == 200);
    CHECK(default_bin_count(100'000) == 93);
    CHECK_THROWS_AS(make_histogram({1.0}, 0.0, 1.0, 0), ArgumentError);
    const Histogram flat = make_histogram({2.0, 2.0}, 2.0, 2.0, 3);
    CHECK(total(flat.counts) == 2);
}

TEST_CASE("monotone fraction ignores sparse bins", "[verify]")
{
    const std::vector<std::uint64_t> c{0, 3, 1, 30, 40, 38, 90};
    auto [all, pairs_all] = increasing_fraction(c, 0, c.size(), 0);
    CHECK(pairs_all == 6);
    CHECK_THAT(all, WithinAbs(4.0 / 6.0, 1e-15));
    auto [dense, pairs_dense] = increasing_fraction(c, 0, c.size(), 25);
    CHECK(pairs_dense == 4);
    CHECK_THAT(dense, WithinAbs(3.0 / 4.0, 1e-15));
}

TEST_CASE("pairwise differences rise monotonically to zero", "[verify][property]")
{
    for (const Family& f : {Family::normal(0, 1), Family::uniform(0, 1), Family::weibull(1, 1), Family::lognormal(0, 1)}) {
        const ShapeProbe p = pairwise_diff_shape(f, 200'000, 3);
        CHECK(total(p.counts) == p.N);
        CHECK(std::is_sorted(p.edges.begin(), p.edges.end()));
        CHECK(std::adjacent_find(p.edges.begin(), p.edges.end()) == p.edges.end());
        CHECK(p.edges.back() == 0.0);
        CHECK(p.mode_bin == p.counts.size() - 1);
        CHECK(monotonicity_statistic(p) >= 0.9);
    }
}

TEST_CASE("uniform differences follow the triangular density", "[verify]")
{
    // X - X' on X < X' has density 2(1 + d) on [-1, 0]
    const ShapeProbe p = pairwise_diff_shape(Family::uniform(0, 1), 400'000, 4, 20);
    const double w = (p.edges.back() - p.edges.front()) / 20.0;
    for (std::size_t b = 0; b < 20; ++b) {
        const double mid = 0.5 * (p.edges[b] + p.edges[b + 1]);
        const double expected = 2.0 * (1.0 + mid) * w * 400'000.0;
        if (expected > 2000.0) CHECK(std::abs(static_cast<double>(p.counts[b]) - expected) < 5.0 * std::sqrt(expected) + 0.02 * expected);
    }
}

TEST_CASE("normal pairwise differences at a million draws", "[verify]")
{
    const ShapeProbe p = pairwise_diff_shape(Family::normal(0, 1), 1'000'000, 5);
    CHECK(monotonicity_statistic(p) >= 0.95);
}

TEST_CASE("kernel distributions concentrate near zero", "[verify][property]")
{
    for (int k : {3, 4})
        for (const Family& f : declared_families()) {
            const ShapeProbe p = kernel_dist_probe(f, k, 200'000, 6);
            CHECK(total(p.counts) == p.N);
            CHECK(p.k == k);
            CHECK(p.median_over_sigma() <= 0.1);
            CHECK(p.mode_near_zero());
        }
    const ShapeProbe n = kernel_dist_probe(Family::normal(0, 1), 3, 200'000, 6);
    CHECK(n.median_over_sigma() <= 0.1);
    const ShapeProbe ln = kernel_dist_probe(Family::lognormal(0, 1), 4, 200'000, 6);
    CHECK(ln.median_over_sigma() <= 0.1);
    const ShapeProbe u = kernel_dist_probe(Family::uniform(0, 1), 3, 200'000, 6);
    CHECK(u.edges[u.mode_bin] <= 0.0);
    CHECK(u.edges[u.mode_bin + 1] >= 0.0);
}

TEST_CASE("fourth-order kernel of a normal sample sits just above the median bound", "[verify]")
{
    // |median|/sigma for the normal k=4 kernel is about 0.10; documented
    // here because it is the reason the normal is not among the declared
    // families used for the 0.1 bound
    const ShapeProbe p = kernel_dist_probe(Family::normal(0, 1), 4, 400'000, 7);
    CHECK_THAT(p.median_over_sigma(), WithinAbs(0.10, 0.01));
}

TEST_CASE("probes are deterministic", "[verify][property]")
{
    CHECK(pairwise_diff_shape(Family::gamma(3, 1), 100'000, 9) == pairwise_diff_shape(Family::gamma(3, 1), 100'000, 9));
    CHECK(kernel_dist_probe(Family::weibull(1, 1), 3, 50'000, 9) == kernel_dist_probe(Family::weibull(1, 1), 3, 50'000, 9));
    CHECK(equivariance_suite(500, 2) == equivariance_suite(500, 2));
    const Family f = Family::normal(0, 1);
    CHECK(variance_comparison(f, {20, 30}, 0.1, 100, 4, 1) == variance_comparison(f, {20, 30}, 0.1, 100, 4, 3));
}

TEST_CASE("order-statistic SD is noisier than the pairwise SD", "[verify]")
{
    const VarianceComparison v = variance_comparison(Family::normal(0, 1), {20, 50, 100}, 0.1, 400, 11);
    REQUIRE(v.ratio.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(v.var_eq1[i] >= 0.0);
        CHECK(v.var_eq2[i] >= 0.0);
        CHECK(v.ratio[i] > 1.0);
    }
    CHECK(v.dominates());
    CHECK_THROWS_AS(variance_comparison(Family::normal(0, 1), {20}, 0.1, 50, 1), ArgumentError);
    CHECK_THROWS_AS(variance_comparison(Family::normal(0, 1), {5}, 0.1, 100, 1), ArgumentError);
}

TEST_CASE("support extrema by grid search", "[verify]")
{
    const SupportProbe p3 = support_bound_probe(3, 100);
    CHECK_THAT(p3.observed_min, WithinAbs(-1.0 / 3.0, 1e-2));
    CHECK_THAT(p3.observed_max, WithinAbs(1.0 / 3.0, 1e-2));
    CHECK(p3.max_error() <= 1e-2);
    const SupportProbe p4 = support_bound_probe(4, 100);
    CHECK_THAT(p4.observed_min, WithinAbs(-1.0 / 6.0, 1e-2));
    CHECK_THAT(p4.observed_max, WithinAbs(0.25, 1e-2));
    const SupportProbe p5 = support_bound_probe(5, 20);
    CHECK(p5.max_error() <= 1e-2);
    const SupportProbe p2 = support_bound_probe(2, 20);
    CHECK(p2.observed_min == 0.5);
    CHECK(p2.observed_max == 0.5);
    CHECK_THROWS_AS(support_bound_probe(7, 20), ArgumentError);
}

TEST_CASE("equivariance suite", "[verify]")
{
    const EquivarianceReport r = equivariance_suite(2000, 1);
    CHECK(r.max_kernel_dev <= 1e-9);
    CHECK(r.max_kernel_dev_general <= 1e-9);
    CHECK(r.max_shift_dev <= 1e-9);
    CHECK(r.max_standardized_dev <= 1e-9);
    CHECK(r.odd_reflection_exact);
    CHECK_THROWS_AS(equivariance_suite(10, 1), ArgumentError);
}
