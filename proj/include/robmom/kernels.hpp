#pragma once

// Central-moment kernels psi_k: the symmetric functions of k arguments whose
// average over all k-subsets of a sample is the unbiased estimator of the
// k-th central moment.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "robmom/error.hpp"
#include "robmom/numeric.hpp"

namespace robmom {

inline constexpr int kMaxKernelOrder = 12;

/// Moment order k, 2 <= k <= kMaxKernelOrder.
class KernelOrder {
public:
    explicit KernelOrder(int k) : k_(k)
    {
        if (k < 2) throw ArgumentError("kernel order must be at least 2, got " + std::to_string(k));
        if (k > kMaxKernelOrder)
            throw UnsupportedOrderError("kernel order " + std::to_string(k) + " exceeds the supported maximum of "
                                        + std::to_string(kMaxKernelOrder));
    }
    constexpr int value() const noexcept { return k_; }
    friend constexpr bool operator==(KernelOrder, KernelOrder) = default;

private:
    int k_;
};

/// Exact binomial coefficient for small arguments (k <= 64 keeps it in range).
inline std::uint64_t binomial_small(int n, int r)
{
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t c = 1;
    for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return c;
}

// ---------------------------------------------------------------------------
// Monomial expansion of psi_k
// ---------------------------------------------------------------------------

/// One term coef * x[lead]^power * prod_{b in mask} x[b].
struct KernelTerm {
    std::int32_t num;   // signed numerator of the coefficient
    std::int32_t den;   // positive denominator
    std::uint8_t lead;
    std::uint8_t power;
    std::uint16_t mask; // never contains `lead`
    double coef;
};

/// The full expansion
///   psi_k = sum_{j=0}^{k-2} (-1)^j/(k-j) sum x_{i1}^{k-j} x_{i2}...x_{i_{j+1}}
///           + (-1)^{k-1} (k-1) x_1...x_k,
/// with the inner sum over distinct i1 and increasing i2 < ... < i_{j+1}.
class MonomialTable {
public:
    MonomialTable() = default;

    static MonomialTable build(int k)
    {
        MonomialTable t;
        t.k_ = k;
        const std::uint32_t full = (1u << k) - 1u;
        for (int j = 0; j <= k - 2; ++j) {
            const std::int32_t num = (j % 2 == 0) ? 1 : -1;
            const std::int32_t den = k - j;
            for (int lead = 0; lead < k; ++lead) {
                const std::uint32_t others = full & ~(1u << lead);
                // enumerate j-subsets of `others`
                for (std::uint32_t s = others;; s = (s - 1) & others) {
                    if (std::popcount(s) == j)
                        t.terms_.push_back({num, den, static_cast<std::uint8_t>(lead),
                                            static_cast<std::uint8_t>(k - j), static_cast<std::uint16_t>(s),
                                            static_cast<double>(num) / den});
                    if (s == 0) break;
                }
            }
        }
        const std::int32_t last = ((k - 1) % 2 == 0 ? 1 : -1) * (k - 1);
        t.terms_.push_back({last, 1, 0, 1, static_cast<std::uint16_t>(full & ~1u), static_cast<double>(last)});
        return t;
    }

    int order() const noexcept { return k_; }
    std::span<const KernelTerm> terms() const noexcept { return terms_; }

    /// Plain evaluation in any field type (exact rationals in tests).
    template <class T>
    T evaluate(std::span<const T> x) const
    {
        T sum = T(0);
        for (const auto& term : terms_) {
            T m = x[term.lead];
            for (int p = 1; p < term.power; ++p) m *= x[term.lead];
            for (int b = 0; b < k_; ++b)
                if (term.mask & (1u << b)) m *= x[b];
            sum += T(term.num) * m / T(term.den);
        }
        return sum;
    }

    /// Double-precision evaluation with compensated summation.
    double evaluate_compensated(const double* x) const noexcept
    {
        std::array<std::array<double, kMaxKernelOrder + 1>, kMaxKernelOrder> pw{};
        for (int i = 0; i < k_; ++i) {
            pw[i][0] = 1.0;
            for (int e = 1; e <= k_; ++e) pw[i][e] = pw[i][e - 1] * x[i];
        }
        CompensatedSum sum;
        for (const auto& term : terms_) {
            double m = pw[term.lead][term.power];
            for (std::uint32_t mask = term.mask; mask != 0; mask &= mask - 1) m *= x[std::countr_zero(mask)];
            sum.add(term.coef * m);
        }
        return sum.value();
    }

private:
    int k_ = 0;
    std::vector<KernelTerm> terms_;
};

/// Shared, lazily built expansion for order k. Thread-safe; tables are
/// immutable once built.
inline const MonomialTable& monomial_table(KernelOrder order)
{
    static std::array<std::once_flag, kMaxKernelOrder + 1> flags;
    static std::array<MonomialTable, kMaxKernelOrder + 1> tables;
    const int k = order.value();
    std::call_once(flags[k], [k] { tables[k] = MonomialTable::build(k); });
    return tables[k];
}

namespace detail {

inline double psi2(const double* x) noexcept
{
    const double d = x[0] - x[1];
    return 0.5 * d * d;
}

inline double psi3(const double* x) noexcept
{
    const double m = (x[0] + x[1] + x[2]) / 3.0;
    const double a = x[0] - m, b = x[1] - m, c = x[2] - m;
    return 1.5 * (a * a * a + b * b * b + c * c * c);
}

// h-statistic of a 4-point sample: (11 S4 - 15 S2^2 / 4) / 6 with S_r the
// centered power sums.
inline double psi4(const double* x) noexcept
{
    const double m = 0.25 * ((x[0] + x[1]) + (x[2] + x[3]));
    double s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double d = x[i] - m;
        const double d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    return (11.0 * s4 - 3.75 * s2 * s2) / 6.0;
}

inline double psi_general_unchecked(const MonomialTable& table, const double* x) noexcept
{
    const int k = table.order();
    double centered[kMaxKernelOrder];
    CompensatedSum s;
    for (int i = 0; i < k; ++i) s.add(x[i]);
    const double m = s.value() / k;
    for (int i = 0; i < k; ++i) centered[i] = x[i] - m;
    return table.evaluate_compensated(centered);
}

/// Fast evaluator for the hot loops of pseudo-sample construction; the
/// caller guarantees x has k finite entries.
class KernelEvaluator {
public:
    explicit KernelEvaluator(KernelOrder k) : k_(k.value()), table_(k_ > 4 ? &monomial_table(k) : nullptr) {}

    double operator()(const double* x) const noexcept
    {
        switch (k_) {
        case 2: return psi2(x);
        case 3: return psi3(x);
        case 4: return psi4(x);
        default: return psi_general_unchecked(*table_, x);
        }
    }
    int order() const noexcept { return k_; }

private:
    int k_;
    const MonomialTable* table_;
};

inline void check_tuple(KernelOrder k, std::span<const double> t)
{
    if (static_cast<int>(t.size()) != k.value())
        throw ArgumentError("kernel tuple has " + std::to_string(t.size()) + " entries, expected "
                            + std::to_string(k.value()));
    for (double v : t)
        if (!std::isfinite(v)) throw ArgumentError("kernel tuple contains a non-finite value");
}

} // namespace detail

/// psi_k through the general expansion. Arguments are shifted by their mean
/// first; psi_k is translation invariant and the shift keeps the alternating
/// monomial sum well conditioned.
inline double eval_psi_general(KernelOrder k, std::span<const double> t)
{
    detail::check_tuple(k, t);
    return detail::psi_general_unchecked(monomial_table(k), t.data());
}

/// Closed forms for k = 2, 3, 4 (the h-statistics of a k-point sample).
inline double eval_psi_closed_form(KernelOrder k, std::span<const double> t)
{
    detail::check_tuple(k, t);
    switch (k.value()) {
    case 2: return detail::psi2(t.data());
    case 3: return detail::psi3(t.data());
    case 4: return detail::psi4(t.data());
    default: throw ArgumentError("no closed form for kernel order " + std::to_string(k.value()));
    }
}

/// psi_k(t). Symmetric in its arguments; zero on constant tuples.
inline double eval_psi(KernelOrder k, std::span<const double> t)
{
    detail::check_tuple(k, t);
    return detail::KernelEvaluator(k)(t.data());
}

/// psi_k at the two-level tuple (a repeated i times, b repeated k-i times):
/// C(k,i)^{-1} (-1)^{1+i} (a-b)^k.
inline double boundary_value(KernelOrder k, int i, double a, double b)
{
    const int kk = k.value();
    if (i < 1 || i > kk - 1)
        throw ArgumentError("boundary index must lie in [1, k-1], got " + std::to_string(i));
    const double sign = (i % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(a - b, kk) / static_cast<double>(binomial_small(kk, i));
}

/// Extent of psi_k over tuples whose minimum and maximum differ by
/// -delta (delta <= 0):
///   ( -C(k, (3+(-1)^k)/2)^{-1} (-delta)^k,  (1/k) (-delta)^k ).
/// The lower end is the infimum for k >= 3; for k = 2 every such tuple
/// gives delta^2 / 2.
inline std::pair<double, double> support_bounds(KernelOrder k, double delta)
{
    if (!(delta <= 0.0)) throw ArgumentError("range delta must be non-positive");
    const int kk = k.value();
    const double span_k = std::pow(-delta, kk);
    const int r = (kk % 2 == 0) ? 2 : 1;
    const double lower = -span_k / static_cast<double>(binomial_small(kk, r));
    const double upper = span_k / kk;
    return {lower == 0.0 ? 0.0 : lower, upper};
}

// ---------------------------------------------------------------------------
// Summation identities used in the translation-invariance argument
// ---------------------------------------------------------------------------

using Rational = boost::multiprecision::cpp_rational;

struct IdentitySums {
    Rational alternating;  // sum (-1)^{g+1} C(h-1, g-k+h-1)
    Rational weighted;     // same, each term times (g-k+h-1)/(k-g+1)
};

/// Both sums over g = k-h+1 .. k-1, evaluated exactly. They equal (-1)^k
/// and (h-2)(-1)^k.
inline IdentitySums lemma_identity_sums(int k, int h)
{
    if (h < 2 || h > k)
        throw ArgumentError("identity sums need 2 <= h <= k, got k=" + std::to_string(k) + ", h=" + std::to_string(h));
    if (k > 60) throw ArgumentError("identity sums are limited to k <= 60");
    IdentitySums out{0, 0};
    for (int g = k - h + 1; g <= k - 1; ++g) {
        const int r = g - k + h - 1;
        const Rational c = Rational(static_cast<long long>(binomial_small(h - 1, r)));
        const Rational term = ((g + 1) % 2 == 0) ? c : Rational(-c);
        out.alternating += term;
        out.weighted += term * Rational(r) / Rational(k - g + 1);
    }
    return out;
}

/// The closed forms the identity sums must reproduce.
inline IdentitySums lemma_identity_closed_form(int k, int h)
{
    const Rational s = (k % 2 == 0) ? Rational(1) : Rational(-1);
    return {s, Rational(h - 2) * s};
}

} // namespace robmom
