#pragma once

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qpefl/common.hpp"

namespace qpefl::detail {

// In-place radix-2 DFT with the negative-exponent convention:
//   out[y] = sum_j in[j] * exp(-2*pi*i*y*j/N).
// Twiddles come from std::polar of exact angles, so the result tracks the
// literal O(N^2) sum to ~1e-15.
inline void fft_pow2(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be a power of two");
    if (n == 1) return;

    const int logn = std::countr_zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < logn; ++b) r |= ((i >> b) & 1u) << (logn - 1 - b);
        if (i < r) std::swap(a[i], a[r]);
    }

    std::vector<cplx> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx w = tw[k * stride];
                const cplx u = a[base + k];
                const cplx v = a[base + k + len / 2] * w;
                a[base + k] = u + v;
                a[base + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace qpefl::detail
