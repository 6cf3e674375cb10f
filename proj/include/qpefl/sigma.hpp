#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "qpefl/common.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/window.hpp"

namespace qpefl {

/// Autocorrelation sigma_j = sum_{j'} a_{|j|+j'} a_{j'} of the window
/// coefficients. Acts as the smoothing factor of the truncated Fourier
/// series behind the filter curve; symmetric in j, so only j >= 0 is stored.
struct SigmaFactor {
    QpeGrid grid;
    WindowKind kind = WindowKind::rectangular;
    std::vector<double> sigma;  // index j in [0, N)

    double at(long j) const { return sigma[static_cast<std::size_t>(std::labs(j))]; }
};

inline SigmaFactor sigma_factor(const Window& window, const QpeGrid& grid) {
    if (window.size() != grid.size)
        throw std::invalid_argument("sigma_factor: window length does not match grid size");
    const std::size_t n = grid.size;
    SigmaFactor s;
    s.grid = grid;
    s.kind = window.kind;
    s.sigma.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k + j < n; ++k) acc += window.coeffs[k + j] * window.coeffs[k];
        s.sigma[j] = acc;
    }
    return s;
}

/// N -> infinity limit of sigma_{|x| N} for the windows with a closed form.
inline double sigma_limit(WindowKind kind, double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("sigma_limit: x must be in [-1, 1]");
    const double ax = std::fabs(x);
    switch (kind) {
        case WindowKind::rectangular:
            return 1.0 - ax;
        case WindowKind::sine:
            return std::sin(pi * ax) / pi + (1.0 - ax) * std::cos(pi * x);
        case WindowKind::kaiser:
            throw std::invalid_argument("sigma_limit: no closed-form limit for the Kaiser window");
    }
    throw std::invalid_argument("sigma_limit: unknown window kind");
}

/// DFT of the 0/1 step that keeps bins 0..y_c:
/// g~(j) = e^{i pi y_c j / N} sin(pi (y_c+1) j / N) / (N sin(pi j / N)),
/// g~(0) = (y_c+1)/N, and g~(-j) = conj(g~(j)).
struct StepDft {
    std::size_t grid_size = 0;
    std::size_t y_c = 0;
    double z_c = 0.0;  // 2 pi y_c / N
    std::vector<cplx> coeffs;  // index j in [0, N)

    cplx at(long j) const {
        const cplx v = coeffs[static_cast<std::size_t>(std::labs(j))];
        return j < 0 ? std::conj(v) : v;
    }
};

inline StepDft step_dft(const QpeGrid& grid, std::size_t y_c) {
    if (y_c == 0 || y_c >= grid.size) throw std::invalid_argument("step_dft: require 0 < y_c < N");
    const std::size_t n = grid.size;
    const double nd = static_cast<double>(n);
    StepDft s;
    s.grid_size = n;
    s.y_c = y_c;
    s.z_c = two_pi * static_cast<double>(y_c) / nd;
    s.coeffs.resize(n);
    s.coeffs[0] = cplx(static_cast<double>(y_c + 1) / nd, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double mag = std::sin(pi * static_cast<double>(y_c + 1) * jd / nd) / (nd * std::sin(pi * jd / nd));
        s.coeffs[j] = mag * std::polar(1.0, pi * static_cast<double>(y_c) * jd / nd);
    }
    return s;
}

/// Truncated-series reconstruction of the filter:
/// sum_{j=-(N-1)}^{N-1} g~(j) sigma_j e^{-i E T j}. Equals the kept
/// probability R(E) up to an O(1e-15) imaginary residue.
inline cplx reconstruct_filter_sum(const SigmaFactor& sigma, const StepDft& step, double energy) {
    if (sigma.grid.size != step.grid_size)
        throw std::invalid_argument("reconstruct_filter: sigma and step built on different grids");
    const long n = static_cast<long>(sigma.grid.size);
    cplx acc{0.0, 0.0};
    for (long j = -(n - 1); j <= n - 1; ++j) {
        const double phase = std::fmod(-energy * sigma.grid.T * static_cast<double>(j), two_pi);
        acc += step.at(j) * sigma.at(j) * std::polar(1.0, phase);
    }
    return acc;
}

inline double reconstruct_filter(const SigmaFactor& sigma, const StepDft& step, double energy) {
    return reconstruct_filter_sum(sigma, step, energy).real();
}

}  // namespace qpefl
