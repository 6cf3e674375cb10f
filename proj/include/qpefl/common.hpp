#pragma once

#include <atomic>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qpefl {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

inline std::atomic<unsigned>& thread_count_storage() {
    static std::atomic<unsigned> count{1};
    return count;
}

}  // namespace detail

/// Number of worker threads used by slot-parallel loops. Default 1.
inline unsigned thread_count() { return detail::thread_count_storage().load(); }

inline void set_thread_count(unsigned k) {
    if (k == 0) throw std::invalid_argument("thread count must be >= 1");
    detail::thread_count_storage().store(k);
}

namespace detail {

// Runs fn(i) for i in [0, count). Each index owns its output slot, so the
// result is identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned threads = thread_count();
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned nw = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    pool.reserve(nw);
    for (unsigned t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Pairwise (cascade) summation; fixed reduction tree independent of thread
// count, so sums are bitwise reproducible.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 32) {
        T acc = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

}  // namespace detail

}  // namespace qpefl
