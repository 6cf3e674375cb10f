#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qpefl/common.hpp"
#include "qpefl/fft.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/window.hpp"

namespace qpefl {

/// Per-eigenstate measurement statistics: amplitudes A(y) and probabilities
/// P(y) = |A(y)|^2 over the N frequency points of a grid.
struct ResponseCurve {
    QpeGrid grid;
    double energy = 0.0;  // reduced into [0, 2*pi/T)
    std::vector<cplx> amps;
    std::vector<double> probs;

    double prob_sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

namespace detail {

inline void check_window_grid(const Window& window, const QpeGrid& grid) {
    if (window.size() != grid.size)
        throw std::invalid_argument("window length does not match grid size");
}

// Phase vector b_j = a_j * exp(i*E*T*j).
inline std::vector<cplx> modulated_coeffs(const Window& window, const QpeGrid& grid, double e_red) {
    const std::size_t n = grid.size;
    std::vector<cplx> b(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double phase = std::fmod(e_red * grid.T * static_cast<double>(j), two_pi);
        b[j] = window.coeffs[j] * std::polar(1.0, phase);
    }
    return b;
}

inline ResponseCurve finish_curve(const QpeGrid& grid, double e_red, std::vector<cplx> amps) {
    ResponseCurve curve;
    curve.grid = grid;
    curve.energy = e_red;
    curve.probs.resize(amps.size());
    for (std::size_t y = 0; y < amps.size(); ++y) curve.probs[y] = std::norm(amps[y]);
    curve.amps = std::move(amps);
    return curve;
}

}  // namespace detail

/// A(y) = (1/sqrt N) sum_j a_j exp(i (E T - 2 pi y / N) j), evaluated with a
/// radix-2 transform. Agreement with amplitude_direct() is pinned to 1e-12
/// by the test suite.
inline ResponseCurve amplitude(const Window& window, const QpeGrid& grid, double energy) {
    detail::check_window_grid(window, grid);
    const double e_red = reduce_energy(energy, grid);
    std::vector<cplx> b = detail::modulated_coeffs(window, grid, e_red);
    detail::fft_pow2(b);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size));
    for (auto& v : b) v *= scale;
    return detail::finish_curve(grid, e_red, std::move(b));
}

/// Same sum evaluated termwise in O(N^2); kept as the slow reference path.
inline ResponseCurve amplitude_direct(const Window& window, const QpeGrid& grid, double energy) {
    detail::check_window_grid(window, grid);
    const std::size_t n = grid.size;
    const double e_red = reduce_energy(energy, grid);
    const std::vector<cplx> b = detail::modulated_coeffs(window, grid, e_red);
    std::vector<cplx> tw(n);
    for (std::size_t k = 0; k < n; ++k)
        tw[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));
    std::vector<cplx> amps(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t y = 0; y < n; ++y) {
        cplx acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += b[j] * tw[idx];
            idx += y;
            if (idx >= n) idx -= n;
        }
        amps[y] = acc * scale;
    }
    return detail::finish_curve(grid, e_red, std::move(amps));
}

namespace detail {

// sum_{j=0}^{N-1} e^{i phi j} in the cancellation-free Dirichlet form.
inline cplx geometric_phase_sum(double phi, std::size_t n) {
    const double m = std::fmod(std::fmod(phi, two_pi) + two_pi, two_pi);
    if (std::min(m, two_pi - m) < 1e-12) return cplx(static_cast<double>(n), 0.0);
    const double nd = static_cast<double>(n);
    const double ratio = std::sin(0.5 * nd * phi) / std::sin(0.5 * phi);
    return ratio * std::polar(1.0, 0.5 * (nd - 1.0) * phi);
}

}  // namespace detail

/// Closed-form amplitudes for the rectangular and sine windows. The
/// expressions reduce to one resp. two shifted Dirichlet kernels, which also
/// supplies the limit values at the removable singularities.
inline ResponseCurve amplitude_closed_form(WindowKind kind, const QpeGrid& grid, double energy) {
    if (kind == WindowKind::kaiser)
        throw std::invalid_argument("amplitude_closed_form: no closed form for the Kaiser window; use amplitude()");
    const std::size_t n = grid.size;
    const double nd = static_cast<double>(n);
    const double e_red = reduce_energy(energy, grid);
    std::vector<cplx> amps(n);
    for (std::size_t y = 0; y < n; ++y) {
        const double theta = e_red * grid.T - two_pi * static_cast<double>(y) / nd;
        if (kind == WindowKind::rectangular) {
            amps[y] = detail::geometric_phase_sum(theta, n) / nd;
        } else {
            const cplx sp = detail::geometric_phase_sum(theta + pi / nd, n);
            const cplx sm = detail::geometric_phase_sum(theta - pi / nd, n);
            amps[y] = std::sqrt(2.0) / (cplx(0.0, 2.0) * nd) * (sp - sm);
        }
    }
    return detail::finish_curve(grid, e_red, std::move(amps));
}

/// Least-squares slope of log P(y) against log(circular distance from the
/// peak), fitted over distances in [4, N/4]. Requires a genuinely off-grid
/// energy; near the grid the rectangular tail collapses to zero.
inline double tail_decay_exponent(const Window& window, const QpeGrid& grid, double energy) {
    detail::check_window_grid(window, grid);
    if (grid.size < 256) throw std::invalid_argument("tail_decay_exponent: need N >= 256");
    const double e_red = reduce_energy(energy, grid);
    const double u = e_red / grid.cell();
    const double frac = u - std::floor(u);
    if (frac < 0.2 || frac > 0.8)
        throw std::domain_error("tail_decay_exponent: energy too close to a grid point (fractional offset outside [0.2, 0.8])");

    const ResponseCurve curve = amplitude(window, grid, e_red);
    const std::size_t n = grid.size;
    const long peak = static_cast<long>(std::lround(u)) % static_cast<long>(n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::size_t y = 0; y < n; ++y) {
        const long fwd = (static_cast<long>(y) - peak + static_cast<long>(n)) % static_cast<long>(n);
        const long dist = std::min(fwd, static_cast<long>(n) - fwd);
        if (dist < 4 || dist > static_cast<long>(n / 4)) continue;
        if (curve.probs[y] <= 1e-300) continue;
        const double lx = std::log(static_cast<double>(dist));
        const double ly = std::log(curve.probs[y]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++count;
    }
    if (count < 8) throw std::domain_error("tail_decay_exponent: tail has no measurable support");
    const double cd = static_cast<double>(count);
    return (cd * sxy - sx * sy) / (cd * sxx - sx * sx);
}

namespace detail {

// Leakage outside the ceil(2*alpha+1) highest-probability points, with ties
// broken toward the peak. Summed smallest-first over the discarded bins so
// values far below 1 stay accurate.
inline double kaiser_leakage_at(const Window& window, const QpeGrid& grid, double alpha, double offset_cells) {
    const std::size_t n = grid.size;
    const double u = static_cast<double>(n / 2) + offset_cells;
    const ResponseCurve curve = amplitude(window, grid, u * grid.cell());
    const long peak = static_cast<long>(std::lround(u)) % static_cast<long>(n);
    const std::size_t keep = static_cast<std::size_t>(std::min<double>(
        std::ceil(2.0 * alpha + 1.0), static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    for (std::size_t y = 0; y < n; ++y) order[y] = y;
    auto circ_dist = [&](std::size_t y) {
        const long fwd = (static_cast<long>(y) - peak + static_cast<long>(n)) % static_cast<long>(n);
        return std::min(fwd, static_cast<long>(n) - fwd);
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (curve.probs[a] != curve.probs[b]) return curve.probs[a] > curve.probs[b];
        if (circ_dist(a) != circ_dist(b)) return circ_dist(a) < circ_dist(b);
        return a < b;
    });

    double leak = 0.0;
    for (std::size_t i = n; i-- > keep;) leak += curve.probs[order[i]];
    return leak;
}

}  // namespace detail

/// Maximum leakage outside the mainlobe over one grid cell of peak offsets:
/// 64 uniformly spaced offsets plus golden-section refinement around the
/// scan maximum. Monotone non-increasing in alpha.
inline double kaiser_eps_max(double alpha, const QpeGrid& grid) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("kaiser_eps_max: alpha must be positive");
    const Window window = make_window(WindowKind::kaiser, grid, alpha);

    constexpr int n_offsets = 64;
    std::vector<double> vals(n_offsets);
    detail::parallel_for(n_offsets, [&](std::size_t i) {
        const double f = (static_cast<double>(i) + 0.5) / n_offsets;
        vals[i] = detail::kaiser_leakage_at(window, grid, alpha, f);
    });
    std::size_t imax = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[imax]) imax = i;
    double best = vals[imax];

    double lo = (static_cast<double>(imax) + 0.5) / n_offsets - 1.0 / n_offsets;
    double hi = (static_cast<double>(imax) + 0.5) / n_offsets + 1.0 / n_offsets;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = detail::kaiser_leakage_at(window, grid, alpha, x1);
    double f2 = detail::kaiser_leakage_at(window, grid, alpha, x2);
    for (int it = 0; it < 48; ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = detail::kaiser_leakage_at(window, grid, alpha, x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = detail::kaiser_leakage_at(window, grid, alpha, x1);
        }
    }
    return std::max({best, f1, f2});
}

}  // namespace qpefl
