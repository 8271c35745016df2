#pragma once

// Weighted Hodges-Lehmann central and standardized moments, the two
// trimmed standard deviations, and the classical comparators used to check
// them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robmom/error.hpp"
#include "robmom/kernels.hpp"
#include "robmom/lstat.hpp"
#include "robmom/numeric.hpp"
#include "robmom/pseudosample.hpp"

namespace robmom {

using Sample = std::vector<double>;

/// An estimate together with everything needed to reproduce it.
struct MomentEstimate {
    double value = 0.0;
    int k = 0;
    double eps0 = 0.0;
    double gamma = 1.0;
    double eps = 0.0;          // sample-level breakdown point
    std::uint64_t n = 0;
    std::uint64_t pseudo_n = 0;
    std::string method;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const MomentEstimate&, const MomentEstimate&) = default;
};

namespace detail {

inline std::string method_label(const char* estimator, const LEstimatorSpec& lest, const PseudoPlan& plan)
{
    return std::string(estimator) + "/" + to_string(lest.kind) + "/" + to_string(plan.mode);
}

inline std::optional<std::uint64_t> plan_seed(const PseudoPlan& plan)
{
    if (plan.mode == PseudoPlan::Mode::MonteCarlo) return plan.seed;
    return std::nullopt;
}

inline void require_finite(std::span<const double> xs)
{
    for (double v : xs)
        if (!std::isfinite(v)) throw ArgumentError("sample contains a non-finite value");
}

} // namespace detail

/// WHLkm: the L-estimator `lest`, trimmed by `trim`, applied to the sorted
/// psi_k pseudo-sample. With eps0 = 0 and a trimmed mean this is Heffernan's
/// U-statistic, the minimum-variance unbiased estimator of the k-th central
/// moment.
inline MomentEstimate whl_central_moment(std::span<const double> sample, KernelOrder k, const TrimSpec& trim,
                                         const LEstimatorSpec& lest = {}, const PseudoPlan& plan = {})
{
    trim.validate();
    if (sample.size() < static_cast<std::size_t>(k.value()))
        throw ArgumentError("kernel order " + std::to_string(k.value()) + " exceeds the sample size "
                            + std::to_string(sample.size()));
    const std::vector<double> pseudo = build_pseudosample(sample, k, plan);
    MomentEstimate est;
    est.value = apply(lest, pseudo, trim);
    est.k = k.value();
    est.eps0 = trim.eps0;
    est.gamma = trim.gamma;
    est.eps = breakdown_from_block(trim.eps0, k.value());
    est.n = sample.size();
    est.pseudo_n = pseudo.size();
    est.method = detail::method_label("whl-central-moment", lest, plan);
    est.seed = detail::plan_seed(plan);
    return est;
}

/// WHLskm = WHLkm / WHLvar^{k/2}. The denominator trim defaults to the
/// numerator trim; the reported breakdown is the smaller of the two.
inline MomentEstimate whl_standardized_moment(std::span<const double> sample, KernelOrder k, const TrimSpec& trim_num,
                                              std::optional<TrimSpec> trim_den = std::nullopt,
                                              const LEstimatorSpec& lest = {}, const PseudoPlan& plan = {})
{
    if (k.value() < 3) throw ArgumentError("standardized moments need k >= 3");
    const TrimSpec den_trim = trim_den.value_or(trim_num);
    MomentEstimate num = whl_central_moment(sample, k, trim_num, lest, plan);
    const MomentEstimate var = whl_central_moment(sample, KernelOrder(2), den_trim, lest, plan);
    if (!(var.value > 0.0))
        throw DegenerateError("variance estimate in the denominator is not positive (" + std::to_string(var.value) + ")");
    num.value /= std::pow(var.value, 0.5 * k.value());
    num.eps = std::min(num.eps, var.eps);
    num.method = detail::method_label("whl-standardized-moment", lest, plan);
    return num;
}

/// Square root of the trimmed mean of the psi_2 pseudo-sample, i.e. of the
/// halved squared pairwise differences. The halving makes the untrimmed
/// value equal to the Bessel-corrected standard deviation.
inline MomentEstimate trimmed_sd_eq2(std::span<const double> sample, double eps0, double gamma = 1.0,
                                     const PseudoPlan& plan = {})
{
    if (sample.size() < 2) throw ArgumentError("trimmed SD needs at least two observations");
    const TrimSpec trim{eps0, gamma};
    MomentEstimate est = whl_central_moment(sample, KernelOrder(2), trim, LEstimatorSpec::trimmed_mean(), plan);
    est.value = std::sqrt(std::max(0.0, est.value));
    est.method = std::string("trimmed-sd-pairwise/") + to_string(plan.mode);
    return est;
}

/// Trimmed SD from symmetric order-statistic differences: with X sorted
/// (1-based), sqrt of the mean of (X_i - X_{n-i+1})^2 over
/// i = floor(n/2)+1 .. floor(n(1-eps)).
inline MomentEstimate trimmed_sd_eq1(std::span<const double> sample, double eps)
{
    if (!(eps >= 0.0 && eps < 0.5)) throw ArgumentError("eps must lie in [0, 1/2)");
    if (sample.size() < 2) throw ArgumentError("trimmed SD needs at least two observations");
    detail::require_finite(sample);
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    const auto lo = static_cast<std::size_t>(n / 2 + 1);
    const auto hi = static_cast<std::size_t>(std::floor(snap_to_integer(static_cast<double>(n) * (1.0 - eps))));
    if (hi < lo) throw DegenerateError("order-statistic window is empty for n=" + std::to_string(n));
    CompensatedSum s;
    for (std::size_t i = lo; i <= hi; ++i) {
        const double d = x[i - 1] - x[n - i];
        s.add(d * d);
    }
    const std::size_t terms = hi - lo + 1;
    MomentEstimate est;
    est.value = std::sqrt(s.value() / static_cast<double>(terms));
    est.k = 2;
    est.eps0 = eps;
    est.gamma = 1.0;
    est.eps = eps;
    est.n = n;
    est.pseudo_n = terms;
    est.method = "trimmed-sd-order-statistics";
    return est;
}

/// Plug-in central moment (1/n) sum (x - mean)^k.
inline double sample_central_moment(std::span<const double> sample, int k)
{
    if (sample.empty()) throw ArgumentError("central moment of an empty sample");
    if (k < 1) throw ArgumentError("moment order must be positive");
    const double n = static_cast<double>(sample.size());
    const double mean = compensated_sum(sample) / n;
    CompensatedSum s;
    for (double v : sample) s.add(std::pow(v - mean, k));
    return s.value() / n;
}

/// Closed-form unbiased central moments (h-statistics), k in {2, 3, 4}.
inline double unbiased_moment_oracle(std::span<const double> sample, int k)
{
    if (k < 2 || k > 4) throw ArgumentError("closed-form h-statistics are available for k in {2, 3, 4}");
    if (sample.size() < static_cast<std::size_t>(k))
        throw ArgumentError("h-statistic of order " + std::to_string(k) + " needs at least that many observations");
    const double n = static_cast<double>(sample.size());
    const double mean = compensated_sum(sample) / n;
    CompensatedSum s2, s3, s4;
    for (double v : sample) {
        const double d = v - mean;
        s2.add(d * d);
        s3.add(d * d * d);
        s4.add(d * d * d * d);
    }
    switch (k) {
    case 2: return s2.value() / (n - 1.0);
    case 3: return n * s3.value() / ((n - 1.0) * (n - 2.0));
    default: {
        const double S2 = s2.value(), S4 = s4.value();
        return ((n * n - 2.0 * n + 3.0) * S4 - 3.0 * (2.0 * n - 3.0) * S2 * S2 / n)
               / ((n - 1.0) * (n - 2.0) * (n - 3.0));
    }
    }
}

} // namespace robmom
