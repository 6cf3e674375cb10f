#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qpefl/common.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/response.hpp"

namespace qpefl {

/// Low-pass cutoff on the ancilla register: outcomes y <= y_c are kept.
/// With the bit-prefix convention y_c = 2^(n-m) - 1, keeping amounts to
/// post-selecting states whose first m ancilla bits are zero.
struct FilterConfig {
    QpeGrid grid;
    std::size_t y_c = 0;
    int m = -1;  // -1 when y_c was given directly
    double omega_c = 0.0;
};

inline FilterConfig make_filter_config(const QpeGrid& grid, std::size_t y_c) {
    if (y_c == 0 || y_c >= grid.size)
        throw std::invalid_argument("filter config: require 0 < y_c < N");
    return FilterConfig{grid, y_c, -1, grid.omega(static_cast<double>(y_c))};
}

inline FilterConfig make_filter_config_m(const QpeGrid& grid, int m) {
    if (m < 1 || m >= grid.n)
        throw std::invalid_argument("filter config: require 1 <= m < n");
    const std::size_t y_c = (std::size_t{1} << (grid.n - m)) - 1;
    FilterConfig cfg = make_filter_config(grid, y_c);
    cfg.m = m;
    return cfg;
}

struct Renormalization {
    double R = 0.0;   // kept probability, sum_{y<=y_c} P(y)
    double dR = 0.0;  // deviation from the ideal step filter
};

/// R = sum_{y<=y_c} P(y); the deviation dR is the tail on the wrong side of
/// the cutoff, summed directly so that tiny leakages keep full precision.
inline Renormalization renormalization(const Window& window, const QpeGrid& grid,
                                       const FilterConfig& config, double energy) {
    detail::check_window_grid(window, grid);
    const ResponseCurve curve = amplitude(window, grid, energy);
    double kept = 0.0, cut = 0.0;
    for (std::size_t y = 0; y < grid.size; ++y) {
        if (y <= config.y_c) kept += curve.probs[y];
        else cut += curve.probs[y];
    }
    const bool in_band = curve.energy <= config.omega_c;
    return Renormalization{kept, in_band ? cut : kept};
}

struct FilterCurve {
    std::vector<double> energies;
    std::vector<double> R;
    std::vector<double> dR;
};

inline FilterCurve filter_curve(const Window& window, const QpeGrid& grid,
                                const FilterConfig& config, const std::vector<double>& energy_samples) {
    for (double e : energy_samples)
        if (e < 0.0 || e >= grid.span())
            throw std::invalid_argument("filter_curve: sample outside [0, 2*pi/T)");
    FilterCurve out;
    out.energies = energy_samples;
    out.R.resize(energy_samples.size());
    out.dR.resize(energy_samples.size());
    detail::parallel_for(energy_samples.size(), [&](std::size_t i) {
        const Renormalization r = renormalization(window, grid, config, energy_samples[i]);
        out.R[i] = r.R;
        out.dR[i] = r.dR;
    });
    return out;
}

inline std::vector<double> uniform_energy_samples(const QpeGrid& grid, std::size_t count) {
    std::vector<double> samples(count);
    for (std::size_t i = 0; i < count; ++i)
        samples[i] = (static_cast<double>(i) + 0.5) * grid.span() / static_cast<double>(count);
    return samples;
}

/// Kaiser filter characterization. `delta`, `e_targ`, `n_estimate` are the
/// leading-order formulas delta ~ (2 pi / N T) ceil(2 alpha),
/// E_targ ~ omega_c - delta, N ~ (2 pi / delta T) 2 alpha. The *_meas fields
/// are read off a 4096-point scan of R(E):
///   - delta_meas: smallest margin delta such that the pass/stop conditions
///     R >= 1-eps on [delta/2, E_targ+delta/2], R <= eps on
///     [E_targ+3delta/2, 2pi/T-delta/2] hold for some E_targ > 0 (bisection);
///   - transition_meas: width u_stop - u_plateau between the edge where R
///     leaves the 1-eps plateau and the edge where it enters the eps
///     stopband, around the cutoff only (boundary transitions excluded).
struct KaiserFilterParams {
    double alpha = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double e_targ = 0.0;
    double n_estimate = 0.0;
    double delta_meas = 0.0;
    double transition_meas = 0.0;
    double e_targ_meas = 0.0;
    double u_plateau = 0.0;  // last energy of the R >= 1-eps plateau
    double u_stop = 0.0;     // first energy of the R <= eps stopband
};

namespace detail {

struct RScan {
    std::vector<double> energies;
    std::vector<double> R;
};

inline RScan scan_renormalization(const Window& window, const QpeGrid& grid,
                                  const FilterConfig& config, std::size_t points) {
    RScan scan;
    scan.energies = uniform_energy_samples(grid, points);
    scan.R.resize(points);
    parallel_for(points, [&](std::size_t i) {
        scan.R[i] = renormalization(window, grid, config, scan.energies[i]).R;
    });
    return scan;
}

}  // namespace detail

inline KaiserFilterParams kaiser_params(double alpha, const QpeGrid& grid,
                                        const FilterConfig& config, double epsilon) {
    if (!(alpha > 0.0)) throw std::invalid_argument("kaiser_params: alpha must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("kaiser_params: epsilon must be in (0, 1)");
    const double ceil2a = std::ceil(2.0 * alpha);
    if (static_cast<double>(config.y_c) <= ceil2a)
        throw std::invalid_argument("kaiser_params: target interval empty (y_c <= ceil(2 alpha))");

    KaiserFilterParams p;
    p.alpha = alpha;
    p.epsilon = epsilon;
    p.delta = grid.cell() * ceil2a;
    p.e_targ = config.omega_c - p.delta;
    p.n_estimate = two_pi / (p.delta * grid.T) * 2.0 * alpha;

    const Window window = make_window(WindowKind::kaiser, grid, alpha);
    constexpr std::size_t scan_points = 4096;
    const detail::RScan scan = detail::scan_renormalization(window, grid, config, scan_points);
    const double span = grid.span();
    const double step = span / scan_points;

    // Transition edges around the cutoff, scanned outward from the interval
    // midpoints (the plateau midpoint omega_c/2 and the stop midpoint
    // (omega_c + span)/2 are deep inside their regions for y_c > ceil(2a)).
    const auto idx_of = [&](double e) {
        long i = static_cast<long>(std::floor(e / step - 0.5));
        return std::clamp(i, 0L, static_cast<long>(scan_points) - 1L);
    };
    long i = idx_of(0.5 * config.omega_c);
    while (i + 1 < static_cast<long>(scan_points) && scan.R[static_cast<std::size_t>(i + 1)] >= 1.0 - epsilon) ++i;
    p.u_plateau = scan.energies[static_cast<std::size_t>(i)];
    long k = idx_of(0.5 * (config.omega_c + span));
    while (k - 1 >= 0 && scan.R[static_cast<std::size_t>(k - 1)] <= epsilon) --k;
    p.u_stop = scan.energies[static_cast<std::size_t>(k)];
    p.transition_meas = p.u_stop - p.u_plateau;
    p.e_targ_meas = p.u_plateau - 0.5 * p.transition_meas;

    // Smallest margin for which the pass/stop conditions admit an E_targ > 0.
    const auto feasible = [&](double d) {
        if (!(d > 0.0)) return false;
        double u_p = span;  // last scan point from d/2 on with R >= 1-eps throughout
        bool first = true;
        for (std::size_t s = 0; s < scan_points; ++s) {
            if (scan.energies[s] < 0.5 * d) continue;
            if (scan.R[s] < 1.0 - epsilon) {
                if (first) return false;
                u_p = scan.energies[s - 1];
                break;
            }
            first = false;
        }
        double u_s = 0.0;  // first scan point such that R <= eps up to span - d/2
        for (std::size_t s = scan_points; s-- > 0;) {
            if (scan.energies[s] > span - 0.5 * d) continue;
            if (scan.R[s] > epsilon) {
                u_s = scan.energies[s + 1];
                break;
            }
        }
        const double e_targ = u_p - 0.5 * d;
        return e_targ > 0.0 && e_targ + 1.5 * d >= u_s;
    };
    double lo = 0.0, hi = 0.5 * span;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid;
        else lo = mid;
    }
    p.delta_meas = hi;
    return p;
}

}  // namespace qpefl
