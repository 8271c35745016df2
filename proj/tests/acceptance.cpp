// Acceptance run: one PASS/FAIL line per criterion. Tolerances, sizes and
// seeds are fixed here; the exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "robmom/robmom.hpp"

using namespace robmom;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double bessel_sd(const std::vector<double>& x)
{
    const double n = static_cast<double>(x.size());
    const double m = compensated_sum(x) / n;
    CompensatedSum s;
    for (double v : x) s.add((v - m) * (v - m));
    return std::sqrt(s.value() / (n - 1.0));
}

Outcome sqrt2_identity()
{
    constexpr double tol = 1e-12;
    std::mt19937_64 eng(kSeed);
    std::uniform_int_distribution<int> un(5, 200);
    std::normal_distribution<double> nd(3.0, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(un(eng));
        for (auto& v : x) v = nd(eng);
        const double sd = bessel_sd(x);
        worst = std::max(worst, std::abs(trimmed_sd_eq2(x, 0.0).value - sd) / sd);
    }
    return {worst <= tol, fmt("50 samples, n in [5,200]: max rel dev %.2e (tol %.0e)", worst, tol)};
}

Outcome mvue_equivalence()
{
    // deviation relative to max(|h_k|, sd^k), the natural scale of a signed moment
    constexpr double tol = 1e-10;
    std::mt19937_64 eng(kSeed + 1);
    std::uniform_int_distribution<int> un(4, 20);
    std::normal_distribution<double> nd;
    std::exponential_distribution<double> ed;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> x(un(eng));
        for (auto& v : x) v = (rep % 2 == 0) ? nd(eng) : ed(eng);
        const double sd = bessel_sd(x);
        for (int k = 2; k <= 4; ++k) {
            const double u = whl_central_moment(x, KernelOrder(k), {}, LEstimatorSpec::trimmed_mean(), PseudoPlan::exact()).value;
            const double h = unbiased_moment_oracle(x, k);
            worst = std::max(worst, std::abs(u - h) / std::max(std::abs(h), std::pow(sd, k)));
        }
    }
    return {worst <= tol, fmt("100 samples, n <= 20, k in {2,3,4}: max rel dev %.2e (tol %.0e)", worst, tol)};
}

Outcome equivariance()
{
    constexpr double tol = 1e-9;
    const EquivarianceReport r = equivariance_suite(10'000, kSeed);
    const bool pass = r.max_kernel_dev <= tol && r.max_kernel_dev_general <= tol && r.max_shift_dev <= tol
                      && r.max_standardized_dev <= tol && r.odd_reflection_exact;
    return {pass, fmt("10^4 trials, k <= 6: kernel %.2e, general %.2e, shift %.2e, standardized %.2e (tol %.0e); odd "
                      "reflection exact: %s",
                      r.max_kernel_dev, r.max_kernel_dev_general, r.max_shift_dev, r.max_standardized_dev, tol,
                      r.odd_reflection_exact ? "yes" : "no")};
}

Outcome boundary_support()
{
    constexpr double tol_boundary = 1e-11, tol_grid = 1e-2;
    std::mt19937_64 eng(kSeed + 3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 2; k <= 6; ++k)
        for (int i = 1; i < k; ++i)
            for (int rep = 0; rep < 25; ++rep) {
                double a = rep == 0 ? 0.0 : u(eng), b = rep == 0 ? 1.0 : u(eng);
                if (a > b) std::swap(a, b);
                std::vector<double> t(k, b);
                std::fill(t.begin(), t.begin() + i, a);
                worst = std::max(worst, std::abs(eval_psi(KernelOrder(k), t) - boundary_value(KernelOrder(k), i, a, b)));
            }
    const SupportProbe p3 = support_bound_probe(3, 100);
    const SupportProbe p4 = support_bound_probe(4, 100);
    const bool pass = worst <= tol_boundary && p3.max_error() <= tol_grid && p4.max_error() <= tol_grid;
    return {pass, fmt("boundary max abs dev %.2e (tol %.0e); k=3 grid [%.6f, %.6f] vs [%.6f, %.6f]; k=4 grid [%.6f, "
                      "%.6f] vs [%.6f, %.6f] (tol %.0e)",
                      worst, tol_boundary, p3.observed_min, p3.observed_max, p3.bound_lower, p3.bound_upper,
                      p4.observed_min, p4.observed_max, p4.bound_lower, p4.bound_upper, tol_grid)};
}

Outcome identity_sums()
{
    int checked = 0, bad = 0;
    for (int k = 2; k <= 20; ++k)
        for (int h = 2; h <= k; ++h) {
            const auto got = lemma_identity_sums(k, h);
            const auto want = lemma_identity_closed_form(k, h);
            ++checked;
            if (got.alternating != want.alternating || got.weighted != want.weighted) ++bad;
        }
    return {bad == 0, fmt("%d (k,h) pairs with 2 <= h <= k <= 20, exact rational comparison: %d mismatches", checked, bad)};
}

Outcome pairwise_shape()
{
    constexpr double threshold = 0.9;
    std::string detail = "N=10^6, 50 bins:";
    bool pass = true;
    for (const Family& f : {Family::normal(0, 1), Family::uniform(0, 1), Family::weibull(1, 1), Family::lognormal(0, 1)}) {
        const ShapeProbe p = pairwise_diff_shape(f, 1'000'000, kSeed);
        const double m = monotonicity_statistic(p);
        pass = pass && m >= threshold;
        detail += fmt(" %s %.3f (%zu pairs);", f.label().c_str(), m, p.pairs_left);
    }
    return {pass, detail + fmt(" threshold %.2f", threshold)};
}

Outcome median_near_zero()
{
    constexpr double bound = 0.1;
    double worst = 0.0;
    std::string worst_at;
    for (const Family& f : declared_families())
        for (int k : {3, 4})
            for (std::uint64_t seed : {kSeed, kSeed + 1, kSeed + 2}) {
                const ShapeProbe p = kernel_dist_probe(f, k, 1'000'000, seed);
                if (p.median_over_sigma() >= worst) {
                    worst = p.median_over_sigma();
                    worst_at = fmt("%s k=%d seed=%llu", f.describe().c_str(), k, static_cast<unsigned long long>(seed));
                }
            }
    return {worst <= bound, fmt("5 families x k in {3,4} x 3 seeds, N=10^6: max |median|/sigma %.4f at %s (bound %.1f)", worst,
                                worst_at.c_str(), bound)};
}

Outcome variance_dominance()
{
    const VarianceComparison v = variance_comparison(Family::normal(0, 1), {20, 50, 100}, 0.1, 1000, kSeed);
    const bool pass = v.dominates() && v.ratio_non_decreasing();
    return {pass, fmt("normal, eps=0.1, R=1000, seed=%llu: ratio %.3f, %.3f, %.3f at n=20, 50, 100 (need > 1 and "
                      "non-decreasing)",
                      static_cast<unsigned long long>(kSeed), v.ratio[0], v.ratio[1], v.ratio[2])};
}

Outcome congruence_verdicts()
{
    struct Expect {
        Family f;
        const char* param;
        double gamma;
        Congruence want;
    };
    const std::vector<Expect> cases{
        {Family::weibull(1.0, 1.0), "alpha", 1.0, Congruence::NonCongruent},
        {Family::pareto(3.0, 1.0), "alpha", 1.0, Congruence::Congruent},
        {Family::lognormal(0.0, 1.0), "sigma", 0.5, Congruence::Congruent},
        {Family::lognormal(0.0, 1.0), "sigma", 1.0, Congruence::Congruent},
        {Family::normal(0.0, 1.0), "sigma", 1.0, Congruence::Congruent},
        {Family::normal(0.0, 1.0), "mu", 1.0, Congruence::Congruent},
        {Family::laplace(0.0, 1.0), "sigma", 1.0, Congruence::Congruent},
        {Family::laplace(0.0, 1.0), "mu", 1.0, Congruence::Congruent},
    };
    bool pass = true;
    std::string detail = "64-point grid:";
    for (const auto& c : cases) {
        const CongruenceVerdict v = congruence_check(c.f, c.param, c.gamma);
        int pos = 0, neg = 0;
        for (int s : v.signs) {
            if (s > 0) ++pos;
            if (s < 0) ++neg;
        }
        const bool ok = v.verdict == c.want;
        pass = pass && ok;
        if (&c != &cases.front()) detail += ";";
        detail += fmt(" %s %s g=%.1f -> %s (+%d/-%d)", c.f.label().c_str(), c.param, c.gamma, to_string(v.verdict), pos, neg);
        if (!ok) detail += fmt(" expected %s", to_string(c.want));
    }
    return {pass, detail};
}

Outcome weibull_numbers()
{
    auto sig3 = [](double v, double want) { return std::abs(v - want) <= 0.5e-3 * std::max(1.0, std::abs(want)); };
    const double m1 = quantile(Family::weibull(1.0, 1.0), 0.5);
    const double mh = quantile(Family::weibull(0.5, 1.0), 0.5);
    const double mu1 = std::get<double>(family_mean(Family::weibull(1.0, 1.0)));
    const double muh = std::get<double>(family_mean(Family::weibull(0.5, 1.0)));
    const bool pass = sig3(m1, 0.693) && sig3(mh, 0.480) && sig3(mu1, 1.0) && sig3(muh, 2.0);
    return {pass, fmt("median(a=1)=%.5f median(a=1/2)=%.5f mean(a=1)=%.5f mean(a=1/2)=%.5f (3 significant figures)", m1, mh,
                      mu1, muh)};
}

Outcome monte_carlo_consistency()
{
    constexpr double tol = 0.01;
    const std::vector<double> x = sample(Family::weibull(1.0, 1.0), 20, kSeed);
    const TrimSpec trim{0.1, 1.0};
    const double exact = whl_central_moment(x, KernelOrder(3), trim).value;
    int passes = 0;
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        const double mc = whl_central_moment(x, KernelOrder(3), trim, {}, PseudoPlan::monte_carlo(1'000'000, s)).value;
        const double rel = std::abs(mc - exact) / std::abs(exact);
        worst = std::max(worst, rel);
        passes += rel <= tol;
    }
    return {passes >= 9, fmt("n=20 Weibull(1,1), k=3, eps0=0.1, B=10^6: %d/10 seeds within %.0f%% (max rel dev %.4f)",
                             passes, tol * 100, worst)};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double time_limit;  // seconds; 0 = none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "pairwise SD equals sqrt(2)-scaled sample SD", 5, sqrt2_identity},
        {2, "untrimmed WHL moments equal h-statistics", 10, mvue_equivalence},
        {3, "location-scale equivariance", 10, equivariance},
        {4, "boundary values and support extrema", 60, boundary_support},
        {5, "binomial summation identities", 0, identity_sums},
        {6, "pairwise differences monotone toward zero", 30, pairwise_shape},
        {7, "kernel median near zero", 0, median_near_zero},
        {8, "order-statistic SD variance dominates", 120, variance_dominance},
        {9, "congruence verdicts", 5, congruence_verdicts},
        {10, "Weibull median and mean", 0, weibull_numbers},
        {11, "Monte Carlo plan matches exact plan", 0, monte_carlo_consistency},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt("%.2fs", secs);
        if (c.time_limit > 0) {
            timing += fmt(" (limit %.0fs)", c.time_limit);
            if (secs > c.time_limit) o.pass = false;
        }
        if (!o.pass) ++failed;
        std::printf("%s  %2d  %-46s %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
