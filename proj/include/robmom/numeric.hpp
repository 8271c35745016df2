#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace robmom {

/// Neumaier's variant of Kahan summation. Tolerates terms that are larger
/// than the running sum, which happens whenever alternating terms cancel.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept
{
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// Rounds `x` to the nearest integer when it lies within a few ulps of one.
/// Index bounds such as N*(1-eps0) are products of decimal fractions and
/// land a hair off the integer they are meant to be.
inline double snap_to_integer(double x) noexcept
{
    const double r = std::nearbyint(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
    return x;
}

// ---------------------------------------------------------------------------
// Seeded substreams
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Engine for substream `index` of master `seed`. Each (seed, index) pair
/// maps to its own engine state so results do not depend on which worker
/// processes which block.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index)
{
    const std::uint64_t a = splitmix64(seed ^ 0x5851F42D4C957F2DULL);
    const std::uint64_t b = splitmix64(a + splitmix64(index + 0x14057B7EF767814FULL));
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double on the open interval (0, 1).
template <class Engine>
inline double uniform_open01(Engine& eng)
{
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer on [0, bound), bound > 0, by Lemire's multiply-shift
/// with rejection.
template <class Engine>
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound)
{
    unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(eng()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// ---------------------------------------------------------------------------
// Block-parallel loop
// ---------------------------------------------------------------------------

inline unsigned resolve_workers(unsigned requested) noexcept
{
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Calls fn(block) for every block in [0, blocks). Blocks are handed out
/// dynamically; fn must write only to storage owned by its block.
template <class Fn>
void for_each_block(std::uint64_t blocks, unsigned workers, Fn&& fn)
{
    workers = resolve_workers(workers);
    if (workers <= 1 || blocks <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) fn(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= blocks || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(b);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                return;
            }
        }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
    std::vector<std::jthread> pool;
    pool.reserve(n - 1);
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(body);
    body();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace robmom
