#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "qpefl/common.hpp"

namespace qpefl {

/// Discrete frequency grid of a phase-estimation run: n ancilla qubits,
/// N = 2^n points, time step T. Frequency points omega(y) = 2*pi*y/(N*T)
/// cover one period [0, 2*pi/T).
struct QpeGrid {
    int n = 0;
    std::size_t size = 0;  // N = 2^n
    double T = 1.0;

    double omega(double y) const { return two_pi * y / (static_cast<double>(size) * T); }
    double cell() const { return two_pi / (static_cast<double>(size) * T); }
    double span() const { return two_pi / T; }
};

inline QpeGrid make_grid(int n, double T) {
    if (n < 1 || n > 20) throw std::invalid_argument("make_grid: n must be in [1, 20]");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("make_grid: T must be positive");
    return QpeGrid{n, std::size_t{1} << n, T};
}

/// Reduces an energy into the principal period [0, 2*pi/T).
inline double reduce_energy(double e, const QpeGrid& grid) {
    const double span = grid.span();
    double r = std::fmod(e, span);
    if (r < 0.0) r += span;
    if (r >= span) r = 0.0;
    return r;
}

}  // namespace qpefl
