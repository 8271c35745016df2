#pragma once

// L-estimators on an ascending sequence, and the map between pseudo-sample
// trimming and sample-level breakdown.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "robmom/error.hpp"
#include "robmom/numeric.hpp"

namespace robmom {

/// Upper trimming fraction eps0 of the pseudo-sample and lower/upper
/// asymmetry gamma (the lower end is trimmed by gamma * eps0).
struct TrimSpec {
    double eps0 = 0.0;
    double gamma = 1.0;

    void validate() const
    {
        if (!(eps0 >= 0.0 && eps0 < 1.0)) throw ArgumentError("eps0 must lie in [0, 1)");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ArgumentError("gamma must be finite and non-negative");
        if (!(gamma * eps0 + eps0 < 1.0)) throw ArgumentError("trim fractions leave no retained window: (1+gamma)*eps0 >= 1");
    }
};

/// Retained positions [first, last) of an ascending sequence of length n.
/// In 1-based terms: ceil(n*gamma*eps0)+1 .. floor(n*(1-eps0)).
struct TrimWindow {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t size() const noexcept { return last > first ? last - first : 0; }
    bool empty() const noexcept { return last <= first; }
};

inline TrimWindow trim_window(std::size_t n, const TrimSpec& trim)
{
    trim.validate();
    const double N = static_cast<double>(n);
    const double lower = std::ceil(snap_to_integer(N * trim.gamma * trim.eps0));
    const double upper = std::floor(snap_to_integer(N * (1.0 - trim.eps0)));
    TrimWindow w;
    w.first = static_cast<std::size_t>(std::max(0.0, lower));
    w.last = static_cast<std::size_t>(std::max(0.0, std::min(upper, N)));
    return w;
}

namespace detail {

inline void require_sorted(std::span<const double> xs)
{
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw ContractViolation("L-estimator input must be in ascending order");
}

inline TrimWindow nonempty_window(std::size_t n, const TrimSpec& trim)
{
    const TrimWindow w = trim_window(n, trim);
    if (w.empty())
        throw DegenerateError("trimming leaves an empty window (n=" + std::to_string(n)
                              + ", eps0=" + std::to_string(trim.eps0) + ", gamma=" + std::to_string(trim.gamma) + ")");
    return w;
}

inline double median_unchecked(std::span<const double> xs) noexcept
{
    const std::size_t n = xs.size();
    if (n % 2 == 1) return xs[n / 2];
    return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

} // namespace detail

/// Mean of the retained window. With eps0 = 0 this is the ordinary mean.
inline double trimmed_mean(std::span<const double> sorted, const TrimSpec& trim)
{
    detail::require_sorted(sorted);
    const TrimWindow w = detail::nonempty_window(sorted.size(), trim);
    return compensated_sum(sorted.subspan(w.first, w.size())) / static_cast<double>(w.size());
}

inline double median_sorted(std::span<const double> sorted)
{
    if (sorted.empty()) throw ArgumentError("median of an empty sequence");
    detail::require_sorted(sorted);
    return detail::median_unchecked(sorted);
}

enum class LKind { TrimmedMean, Median, WeightedScheme };

/// weight(position, window_size) for positions 0..window_size-1 of the
/// retained window. Weights must be non-negative and sum to one.
using WeightProfile = std::function<double(std::size_t, std::size_t)>;

struct LEstimatorSpec {
    LKind kind = LKind::TrimmedMean;
    WeightProfile weights;

    static LEstimatorSpec trimmed_mean() { return {}; }
    static LEstimatorSpec median() { return {LKind::Median, {}}; }
    static LEstimatorSpec weighted(WeightProfile w) { return {LKind::WeightedScheme, std::move(w)}; }
};

inline const char* to_string(LKind kind) noexcept
{
    switch (kind) {
    case LKind::TrimmedMean: return "trimmed-mean";
    case LKind::Median: return "median";
    case LKind::WeightedScheme: return "weighted";
    }
    return "?";
}

/// Applies the L-estimator to the retained window of `sorted`.
inline double apply(const LEstimatorSpec& spec, std::span<const double> sorted, const TrimSpec& trim)
{
    switch (spec.kind) {
    case LKind::TrimmedMean: return trimmed_mean(sorted, trim);
    case LKind::Median: {
        detail::require_sorted(sorted);
        const TrimWindow w = detail::nonempty_window(sorted.size(), trim);
        return detail::median_unchecked(sorted.subspan(w.first, w.size()));
    }
    case LKind::WeightedScheme: {
        if (!spec.weights) throw ConfigError("weighted L-estimator has no weight profile");
        detail::require_sorted(sorted);
        const TrimWindow w = detail::nonempty_window(sorted.size(), trim);
        const std::size_t m = w.size();
        CompensatedSum total, value;
        for (std::size_t i = 0; i < m; ++i) {
            const double wi = spec.weights(i, m);
            if (!(wi >= 0.0) || !std::isfinite(wi)) throw ConfigError("weights must be finite and non-negative");
            total.add(wi);
            value.add(wi * sorted[w.first + i]);
        }
        if (std::abs(total.value() - 1.0) > 1e-10)
            throw ConfigError("weights sum to " + std::to_string(total.value()) + ", expected 1");
        return value.value();
    }
    }
    throw ConfigError("unknown L-estimator kind");
}

/// Sample-level breakdown point of trimming eps0 applied to a pseudo-sample
/// built from blocks of k observations: 1 - (1 - eps0)^{1/k}.
inline double breakdown_from_block(double eps0, int k)
{
    if (!(eps0 >= 0.0 && eps0 < 1.0)) throw ArgumentError("eps0 must lie in [0, 1)");
    if (k < 1) throw ArgumentError("block size must be at least 1");
    return -std::expm1(std::log1p(-eps0) / k);
}

/// Inverse of breakdown_from_block: 1 - (1 - eps)^k.
inline double block_from_breakdown(double eps, int k)
{
    if (!(eps >= 0.0 && eps < 1.0)) throw ArgumentError("eps must lie in [0, 1)");
    if (k < 1) throw ArgumentError("block size must be at least 1");
    return -std::expm1(std::log1p(-eps) * k);
}

} // namespace robmom
