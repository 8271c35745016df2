#pragma once

// Sorted pseudo-samples of kernel values over k-subsets of a sample, either
// fully enumerated or drawn by seeded Monte Carlo.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "robmom/error.hpp"
#include "robmom/kernels.hpp"
#include "robmom/numeric.hpp"

namespace robmom {

inline constexpr std::uint64_t kDefaultExactBudget = 50'000'000;
inline constexpr std::uint64_t kDrawsPerBlock = 8192;

struct PseudoPlan {
    enum class Mode { Exact, MonteCarlo };

    Mode mode = Mode::Exact;
    std::uint64_t draws = 0;          // MonteCarlo only
    std::uint64_t seed = 0;           // MonteCarlo only
    std::uint64_t chunk = 1u << 16;   // combinations per work unit (Exact)
    std::uint64_t budget = kDefaultExactBudget;
    unsigned workers = 0;             // 0: hardware concurrency

    static PseudoPlan exact(std::uint64_t budget = kDefaultExactBudget)
    {
        PseudoPlan p;
        p.budget = budget;
        return p;
    }
    static PseudoPlan monte_carlo(std::uint64_t draws, std::uint64_t seed)
    {
        PseudoPlan p;
        p.mode = Mode::MonteCarlo;
        p.draws = draws;
        p.seed = seed;
        return p;
    }

    void validate() const
    {
        if (chunk == 0) throw ArgumentError("plan chunk size must be positive");
        if (mode == Mode::MonteCarlo && draws == 0) throw ArgumentError("Monte Carlo plan needs at least one draw");
    }
};

inline const char* to_string(PseudoPlan::Mode m) noexcept
{
    return m == PseudoPlan::Mode::Exact ? "exact" : "monte-carlo";
}

/// C(n, k) exactly; throws OverflowError when the result exceeds 64 bits.
inline std::uint64_t count_combinations(std::uint64_t n, std::uint64_t k)
{
    if (k > n) throw ArgumentError("count_combinations needs 0 <= k <= n");
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // c * (n-k+i) / i is exact at every step: it equals C(n-k+i, i).
        c = c * (n - k + i);
        c /= i;
        if (c > UINT64_MAX)
            throw OverflowError("C(" + std::to_string(n) + ", " + std::to_string(k) + ") does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

/// The rank-th k-subset of {0..n-1} in lexicographic order.
inline std::vector<std::uint32_t> unrank(std::uint64_t rank, std::uint32_t n, std::uint32_t k)
{
    const std::uint64_t total = count_combinations(n, k);
    if (rank >= total)
        throw ArgumentError("rank " + std::to_string(rank) + " out of range for C(" + std::to_string(n) + ", "
                            + std::to_string(k) + ")");
    std::vector<std::uint32_t> out;
    out.reserve(k);
    std::uint32_t c = 0;
    for (std::uint32_t pos = 0; pos < k; ++pos) {
        for (;; ++c) {
            const std::uint64_t block = count_combinations(n - c - 1, k - pos - 1);
            if (rank < block) break;
            rank -= block;
        }
        out.push_back(c++);
    }
    return out;
}

/// Lexicographic rank of a strictly increasing k-subset of {0..n-1}.
inline std::uint64_t rank_of(std::span<const std::uint32_t> subset, std::uint32_t n)
{
    const auto k = static_cast<std::uint32_t>(subset.size());
    std::uint64_t r = 0;
    std::uint32_t c = 0;
    for (std::uint32_t pos = 0; pos < k; ++pos) {
        if (subset[pos] >= n || (pos > 0 && subset[pos] <= subset[pos - 1]))
            throw ArgumentError("subset must be strictly increasing and below n");
        for (; c < subset[pos]; ++c) r += count_combinations(n - c - 1, k - pos - 1);
        ++c;
    }
    return r;
}

/// Advances a lexicographic k-subset of {0..n-1}; false after the last one.
inline bool next_combination(std::span<std::uint32_t> idx, std::uint32_t n) noexcept
{
    const auto k = static_cast<std::uint32_t>(idx.size());
    std::uint32_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::uint32_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

namespace detail {

// Floyd's algorithm: a uniformly random k-subset of {0..n-1}.
template <class Engine>
void draw_subset(Engine& eng, std::uint32_t n, std::uint32_t k, std::uint32_t* out)
{
    std::uint32_t filled = 0;
    for (std::uint32_t j = n - k; j < n; ++j) {
        const auto t = static_cast<std::uint32_t>(uniform_below(eng, static_cast<std::uint64_t>(j) + 1));
        const bool seen = std::find(out, out + filled, t) != out + filled;
        out[filled++] = seen ? j : t;
    }
}

inline void sort_checked(std::vector<double>& values)
{
    for (double v : values)
        if (std::isnan(v)) throw ArgumentError("kernel evaluation produced NaN; input contains invalid values");
    std::stable_sort(values.begin(), values.end());
}

} // namespace detail

/// Size of the pseudo-sample `plan` would build for n observations.
inline std::uint64_t pseudosample_size(std::uint64_t n, KernelOrder k, const PseudoPlan& plan)
{
    if (plan.mode == PseudoPlan::Mode::MonteCarlo) return plan.draws;
    return count_combinations(n, static_cast<std::uint64_t>(k.value()));
}

/// Kernel values psi_k over k-subsets of `sample`, sorted ascending.
///
/// Exact mode enumerates all C(n,k) subsets in rank chunks. MonteCarlo mode
/// draws `plan.draws` subsets of k distinct indices, independently and with
/// replacement across draws; draw block b uses substream (seed, b), so the
/// output depends only on (sample, k, plan), never on the worker count.
inline std::vector<double> build_pseudosample(std::span<const double> sample, KernelOrder k, const PseudoPlan& plan)
{
    plan.validate();
    const auto kk = static_cast<std::uint32_t>(k.value());
    if (sample.size() < kk)
        throw ArgumentError("sample of size " + std::to_string(sample.size()) + " is smaller than kernel order "
                            + std::to_string(kk));
    if (sample.size() > UINT32_MAX) throw CapacityError("sample too large");
    for (double v : sample)
        if (!std::isfinite(v)) throw ArgumentError("sample contains a non-finite value");

    const auto n = static_cast<std::uint32_t>(sample.size());
    const detail::KernelEvaluator psi(k);
    std::vector<double> out;

    if (plan.mode == PseudoPlan::Mode::Exact) {
        std::uint64_t total = 0;
        try {
            total = count_combinations(n, kk);
        } catch (const OverflowError&) {
            throw CapacityError("C(" + std::to_string(n) + ", " + std::to_string(kk)
                                + ") overflows; use Monte Carlo mode");
        }
        if (total > plan.budget)
            throw CapacityError("exact pseudo-sample needs C(" + std::to_string(n) + ", " + std::to_string(kk)
                                + ") = " + std::to_string(total) + " kernel values, above the budget of "
                                + std::to_string(plan.budget) + "; use Monte Carlo mode");
        out.resize(total);
        const std::uint64_t chunks = (total + plan.chunk - 1) / plan.chunk;
        for_each_block(chunks, plan.workers, [&](std::uint64_t c) {
            const std::uint64_t begin = c * plan.chunk;
            const std::uint64_t end = std::min(total, begin + plan.chunk);
            std::vector<std::uint32_t> idx = unrank(begin, n, kk);
            double tuple[kMaxKernelOrder];
            for (std::uint64_t r = begin; r < end; ++r) {
                for (std::uint32_t j = 0; j < kk; ++j) tuple[j] = sample[idx[j]];
                out[r] = psi(tuple);
                next_combination(idx, n);
            }
        });
    } else {
        const std::uint64_t total = plan.draws;
        out.resize(total);
        const std::uint64_t blocks = (total + kDrawsPerBlock - 1) / kDrawsPerBlock;
        for_each_block(blocks, plan.workers, [&](std::uint64_t b) {
            auto eng = substream(plan.seed, b);
            const std::uint64_t begin = b * kDrawsPerBlock;
            const std::uint64_t end = std::min(total, begin + kDrawsPerBlock);
            std::uint32_t idx[kMaxKernelOrder];
            double tuple[kMaxKernelOrder];
            for (std::uint64_t r = begin; r < end; ++r) {
                detail::draw_subset(eng, n, kk, idx);
                for (std::uint32_t j = 0; j < kk; ++j) tuple[j] = sample[idx[j]];
                out[r] = psi(tuple);
            }
        });
    }
    detail::sort_checked(out);
    return out;
}

} // namespace robmom
