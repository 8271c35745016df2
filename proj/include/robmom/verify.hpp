#pragma once

// Monte Carlo probes of the shape, support and equivariance properties of
// central-moment kernel distributions, and the variance comparison of the
// two trimmed standard deviations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "robmom/distributions.hpp"
#include "robmom/error.hpp"
#include "robmom/estimators.hpp"
#include "robmom/kernels.hpp"
#include "robmom/numeric.hpp"

namespace robmom {

/// The family set used for the kernel-distribution probes. Pareto uses
/// alpha = 10 so that psi_3 and psi_4 have finite variance (alpha > 2k).
inline std::vector<Family> declared_families()
{
    return {Family::weibull(1.0, 1.0), Family::gamma(3.0, 1.0), Family::lognormal(0.0, 1.0),
            Family::pareto(10.0, 1.0), Family::laplace(0.0, 1.0)};
}

struct Histogram {
    std::vector<double> edges;          // bins + 1 strictly increasing edges
    std::vector<std::uint64_t> counts;

    std::size_t bins() const noexcept { return counts.size(); }
    std::size_t bin_of(double x) const noexcept
    {
        const double w = (edges.back() - edges.front()) / static_cast<double>(bins());
        const double pos = std::floor((x - edges.front()) / w);
        if (!(pos > 0.0)) return 0;
        return std::min(bins() - 1, static_cast<std::size_t>(pos));
    }
};

inline std::size_t default_bin_count(std::uint64_t n)
{
    return static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(static_cast<double>(n))));
}

/// Equal-width histogram over [lo, hi]; the top edge is inclusive.
inline Histogram make_histogram(const std::vector<double>& xs, double lo, double hi, std::size_t bins)
{
    if (bins == 0) throw ArgumentError("histogram needs at least one bin");
    if (!(hi > lo)) {
        const double pad = std::max(1e-12, std::abs(lo) * 1e-12);
        lo -= pad;
        hi += pad;
    }
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double x : xs) ++h.counts[h.bin_of(x)];
    return h;
}

inline constexpr std::uint64_t kMonotoneMinCount = 25;

/// Fraction of adjacent bin pairs (b, b+1) with counts[b] <= counts[b+1],
/// restricted to bins [from, to) and to pairs where the larger count reaches
/// `min_count`; sparser pairs are dominated by Poisson noise. Returns
/// {fraction, pairs evaluated}; the fraction is 1 when no pair qualifies.
inline std::pair<double, std::size_t> increasing_fraction(const std::vector<std::uint64_t>& counts, std::size_t from,
                                                          std::size_t to, std::uint64_t min_count = kMonotoneMinCount)
{
    std::size_t ok = 0, total = 0;
    for (std::size_t b = from; b + 1 < to; ++b) {
        if (std::max(counts[b], counts[b + 1]) < min_count) continue;
        ++total;
        if (counts[b] <= counts[b + 1]) ++ok;
    }
    return {total == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(total), total};
}

struct ShapeProbe {
    std::string kind;        // "pairwise-difference" or "kernel"
    std::string family;
    int k = 0;               // kernel order; 0 for pairwise differences
    std::uint64_t N = 0;
    std::uint64_t seed = 0;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    double median = 0.0;
    double sigma = 0.0;
    std::size_t mode_bin = 0;
    std::size_t zero_bin = 0;
    double monotone_left = 1.0;   // increasing toward zero from below
    double monotone_right = 1.0;  // decreasing away from zero above
    std::size_t pairs_left = 0;
    std::size_t pairs_right = 0;

    double median_over_sigma() const { return sigma > 0.0 ? std::abs(median) / sigma : 0.0; }
    bool mode_near_zero() const
    {
        return mode_bin + 1 >= zero_bin && mode_bin <= zero_bin + 1;
    }
    friend bool operator==(const ShapeProbe&, const ShapeProbe&) = default;
};

namespace detail {

inline void fill_shape(ShapeProbe& p, std::vector<double>& values, double lo, double hi, std::size_t bins)
{
    const Histogram h = make_histogram(values, lo, hi, bins);
    p.edges = h.edges;
    p.counts = h.counts;
    p.mode_bin = static_cast<std::size_t>(std::max_element(h.counts.begin(), h.counts.end()) - h.counts.begin());
    p.zero_bin = h.bin_of(0.0);

    const std::size_t zb = p.zero_bin;
    std::tie(p.monotone_left, p.pairs_left) = increasing_fraction(h.counts, 0, zb + 1);
    std::vector<std::uint64_t> rev(h.counts.rbegin(), h.counts.rend());
    std::tie(p.monotone_right, p.pairs_right) = increasing_fraction(rev, 0, h.bins() - zb);

    CompensatedSum s;
    for (double v : values) s.add(v);
    const double mean = s.value() / static_cast<double>(values.size());
    CompensatedSum ss;
    for (double v : values) ss.add((v - mean) * (v - mean));
    p.sigma = std::sqrt(ss.value() / static_cast<double>(values.size()));

    const std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) {
        p.median = *mid;
    } else {
        const double upper = *mid;
        const double lower = *std::max_element(values.begin(), mid);
        p.median = 0.5 * (lower + upper);
    }
}

} // namespace detail

/// Histogram of X - X' over N ordered pairs (X < X'), i.e. of -|X - X'|,
/// on [min, 0]. `monotone_left` is the monotonicity statistic: the share of
/// resolved adjacent bins whose counts do not decrease toward zero.
inline ShapeProbe pairwise_diff_shape(const Family& f, std::uint64_t N, std::uint64_t seed, std::size_t bins = 50)
{
    if (N == 0) throw ArgumentError("probe needs at least one draw");
    const std::vector<double> x = sample(f, 2 * N, seed);
    std::vector<double> d(N);
    for (std::uint64_t i = 0; i < N; ++i) d[i] = -std::abs(x[2 * i] - x[2 * i + 1]);
    ShapeProbe p;
    p.kind = "pairwise-difference";
    p.family = f.describe();
    p.N = N;
    p.seed = seed;
    const double lo = *std::min_element(d.begin(), d.end());
    detail::fill_shape(p, d, lo, 0.0, bins);
    return p;
}

inline double monotonicity_statistic(const ShapeProbe& p) { return p.monotone_left; }

/// psi_k over N independent k-tuples of draws from f; histogram on
/// [min, max] with `bins` bins (0: ceil(2 N^{1/3})).
inline ShapeProbe kernel_dist_probe(const Family& f, int k, std::uint64_t N, std::uint64_t seed, std::size_t bins = 0)
{
    if (N == 0) throw ArgumentError("probe needs at least one draw");
    const KernelOrder order(k);
    const std::vector<double> x = sample(f, static_cast<std::size_t>(k) * N, seed);
    const detail::KernelEvaluator psi(order);
    std::vector<double> v(N);
    for (std::uint64_t i = 0; i < N; ++i) v[i] = psi(x.data() + i * static_cast<std::uint64_t>(k));
    ShapeProbe p;
    p.kind = "kernel";
    p.family = f.describe();
    p.k = k;
    p.N = N;
    p.seed = seed;
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    detail::fill_shape(p, v, std::min(*mn, 0.0), std::max(*mx, 0.0), bins == 0 ? default_bin_count(N) : bins);
    return p;
}

struct VarianceComparison {
    std::string family;
    std::vector<std::uint64_t> n_values;
    std::uint64_t replications = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> mean_eq1, mean_eq2;
    std::vector<double> var_eq1, var_eq2;
    std::vector<double> ratio;   // var_eq1 / var_eq2

    bool dominates() const
    {
        return std::all_of(ratio.begin(), ratio.end(), [](double r) { return r > 1.0; });
    }
    bool ratio_non_decreasing() const { return std::is_sorted(ratio.begin(), ratio.end()); }
    friend bool operator==(const VarianceComparison&, const VarianceComparison&) = default;
};

namespace detail {

inline std::pair<double, double> mean_and_variance(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    const double mean = compensated_sum(xs) / n;
    CompensatedSum ss;
    for (double v : xs) ss.add((v - mean) * (v - mean));
    return {mean, ss.value() / (n - 1.0)};
}

} // namespace detail

/// Replication r draws its sample from stream (seed, r) for every n, so the
/// samples for different n are nested (common random numbers).
inline VarianceComparison variance_comparison(const Family& f, const std::vector<std::uint64_t>& n_list, double eps,
                                              std::uint64_t R, std::uint64_t seed, unsigned workers = 0)
{
    if (R < 100) throw ArgumentError("variance comparison needs at least 100 replications");
    if (n_list.empty()) throw ArgumentError("variance comparison needs at least one sample size");
    for (auto n : n_list)
        if (n < 10) throw ArgumentError("variance comparison needs sample sizes of at least 10");
    VarianceComparison out;
    out.family = f.describe();
    out.n_values = n_list;
    out.replications = R;
    out.eps = eps;
    out.seed = seed;
    PseudoPlan plan = PseudoPlan::exact();
    plan.workers = 1;
    for (auto n : n_list) {
        std::vector<double> e1(R), e2(R);
        for_each_block(R, workers, [&](std::uint64_t r) {
            const std::vector<double> x = sample(f, n, splitmix64(seed ^ splitmix64(r)));
            e1[r] = trimmed_sd_eq1(x, eps).value;
            e2[r] = trimmed_sd_eq2(x, eps, 1.0, plan).value;
        });
        const auto [m1, v1] = detail::mean_and_variance(e1);
        const auto [m2, v2] = detail::mean_and_variance(e2);
        out.mean_eq1.push_back(m1);
        out.mean_eq2.push_back(m2);
        out.var_eq1.push_back(v1);
        out.var_eq2.push_back(v2);
        out.ratio.push_back(v1 / v2);
    }
    return out;
}

struct SupportProbe {
    int k = 0;
    int resolution = 0;
    double observed_min = 0.0;
    double observed_max = 0.0;
    double bound_lower = 0.0;
    double bound_upper = 0.0;

    double max_error() const
    {
        return std::max(std::abs(observed_min - bound_lower), std::abs(observed_max - bound_upper));
    }
    friend bool operator==(const SupportProbe&, const SupportProbe&) = default;
};

/// Exhaustive grid search of psi_k over tuples in [0,1]^k with minimum 0
/// and maximum 1; the interior coordinates range over {0, 1/res, ..., 1}.
inline SupportProbe support_bound_probe(int k, int resolution)
{
    const KernelOrder order(k);
    if (k > 6) throw ArgumentError("support probe is limited to k <= 6");
    if (resolution < 1) throw ArgumentError("resolution must be positive");
    const detail::KernelEvaluator psi(order);
    const int free = k - 2;
    std::vector<int> idx(static_cast<std::size_t>(free), 0);
    double t[kMaxKernelOrder] = {};
    t[0] = 0.0;
    t[k - 1] = 1.0;
    SupportProbe p;
    p.k = k;
    p.resolution = resolution;
    p.observed_min = std::numeric_limits<double>::infinity();
    p.observed_max = -std::numeric_limits<double>::infinity();
    for (;;) {
        for (int j = 0; j < free; ++j) t[j + 1] = static_cast<double>(idx[j]) / resolution;
        const double v = psi(t);
        p.observed_min = std::min(p.observed_min, v);
        p.observed_max = std::max(p.observed_max, v);
        int j = 0;
        while (j < free && idx[j] == resolution) idx[j++] = 0;
        if (j == free) break;
        ++idx[j];
    }
    std::tie(p.bound_lower, p.bound_upper) = support_bounds(order, -1.0);
    return p;
}

struct EquivarianceReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double max_kernel_dev = 0.0;          // eval_psi
    double max_kernel_dev_general = 0.0;  // general expansion
    double max_shift_dev = 0.0;           // lambda = 1
    double max_standardized_dev = 0.0;    // WHLskm, lambda > 0
    bool odd_reflection_exact = true;     // psi_k(-t) == -psi_k(t) bitwise for odd k

    double max_dev() const
    {
        return std::max({max_kernel_dev, max_kernel_dev_general, max_shift_dev, max_standardized_dev});
    }
    friend bool operator==(const EquivarianceReport&, const EquivarianceReport&) = default;
};

/// Random checks of psi_k(lambda t + mu) = lambda^k psi_k(t), k in 2..6,
/// t in [-1,1]^k, lambda in [-3,3], mu in [-5,5]. Kernel deviations are
/// relative to max(|lambda^k psi_k(t)|, (|lambda| range(t))^k); the
/// standardized-moment deviation is relative to max(|value|, 1).
inline EquivarianceReport equivariance_suite(std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 100) throw ArgumentError("equivariance suite needs at least 100 trials");
    EquivarianceReport rep;
    rep.trials = trials;
    rep.seed = seed;
    auto eng = substream(seed, 0);
    auto unif = [&](double a, double b) { return a + (b - a) * uniform_open01(eng); };
    std::vector<double> t, u, neg;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const int k = 2 + static_cast<int>(uniform_below(eng, 5));
        const KernelOrder order(k);
        t.resize(k);
        u.resize(k);
        neg.resize(k);
        for (auto& v : t) v = unif(-1.0, 1.0);
        const double lambda = unif(-3.0, 3.0);
        const double mu = unif(-5.0, 5.0);
        for (int i = 0; i < k; ++i) {
            u[i] = lambda * t[i] + mu;
            neg[i] = -t[i];
        }
        const auto [mn, mx] = std::minmax_element(t.begin(), t.end());
        const double scale_floor = std::pow(std::abs(lambda) * (*mx - *mn), k);
        const double lk = std::pow(lambda, k);
        auto dev = [&](double got, double base) {
            const double want = lk * base;
            return std::abs(got - want) / std::max(std::abs(want), scale_floor);
        };
        rep.max_kernel_dev = std::max(rep.max_kernel_dev, dev(eval_psi(order, u), eval_psi(order, t)));
        rep.max_kernel_dev_general =
            std::max(rep.max_kernel_dev_general, dev(eval_psi_general(order, u), eval_psi_general(order, t)));
        for (int i = 0; i < k; ++i) u[i] = t[i] + mu;
        const double base = eval_psi(order, t);
        rep.max_shift_dev = std::max(rep.max_shift_dev, std::abs(eval_psi(order, u) - base)
                                                            / std::max(std::abs(base), std::pow(*mx - *mn, k)));
        if (k % 2 == 1 && eval_psi(order, neg) != -base) rep.odd_reflection_exact = false;

        // estimator level: random sample, positive lambda
        const int ks = 3 + static_cast<int>(uniform_below(eng, 4));
        const int n = ks + 2 + static_cast<int>(uniform_below(eng, 4));
        std::vector<double> x(n), y(n);
        for (auto& v : x) v = unif(-2.0, 2.0);
        const double lp = unif(0.1, 3.0);
        for (int i = 0; i < n; ++i) y[i] = lp * x[i] + mu;
        const TrimSpec trim{0.1 * static_cast<double>(uniform_below(eng, 3)), 1.0};
        try {
            const double a = whl_standardized_moment(x, KernelOrder(ks), trim).value;
            const double b = whl_standardized_moment(y, KernelOrder(ks), trim).value;
            rep.max_standardized_dev = std::max(rep.max_standardized_dev, std::abs(a - b) / std::max(std::abs(a), 1.0));
        } catch (const DegenerateError&) {
            // trimmed variance collapsed; nothing to compare
        }
    }
    return rep;
}

} // namespace robmom
