#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpefl {

namespace detail {

inline double bessel_i0_power_series(double x) {
    // sum_k (x/2)^{2k} / (k!)^2, summed to machine convergence
    double sum = 1.0;
    double term = 1.0;
    const double h = 0.5 * x;
    for (int k = 1; k < 400; ++k) {
        term *= (h / k) * (h / k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

inline double bessel_i0_asymptotic(double x) {
    // I0(x) ~ e^x / sqrt(2 pi x) * sum_k prod_{m<=k}(2m-1)^2 / (k! (8x)^k)
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
        if (next >= term) break;  // divergent part of the asymptotic series
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
}

}  // namespace detail

/// Modified Bessel function of the first kind, order zero, on [0, 100].
/// Power series below the crossover, asymptotic expansion above; the
/// crossover sits where the asymptotic tail drops below 1e-15 relative.
inline double bessel_i0(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("bessel_i0: argument must be finite and non-negative");
    if (x > 100.0) throw std::invalid_argument("bessel_i0: argument above supported range [0, 100]");
    constexpr double crossover = 21.0;
    if (x <= crossover) return detail::bessel_i0_power_series(x);
    return detail::bessel_i0_asymptotic(x);
}

}  // namespace qpefl
