#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qpefl/common.hpp"
#include "qpefl/filter.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/response.hpp"
#include "qpefl/spectrum.hpp"
#include "qpefl/window.hpp"

namespace qpefl {

/// Two-step spectral simulation: a coarse grid filters the spectrum at the
/// cutoff, a fine independent grid resolves it. With negate_energies the
/// lines are sign-flipped on entry and the output axis flipped back, turning
/// the low-pass cutoff into a high-pass one.
struct TwoStepConfig {
    Window stage1_window;
    QpeGrid stage1_grid;
    FilterConfig cutoff;
    Window stage2_window;
    QpeGrid stage2_grid;
    bool negate_energies = false;

    double beta() const { return stage2_grid.T / stage1_grid.T; }
};

struct SpectralResult {
    std::vector<double> omega;            // stage-2 axis (negated back if requested)
    std::vector<double> raw;              // weights unchanged
    std::vector<double> filtered;         // weights scaled by stage-1 R
    std::vector<double> filtered_normalized;  // filtered / sum(w R)
    std::vector<double> error_kept;       // sum_kept w (1-R) P'
    std::vector<double> error_cut;        // sum_cut  w R P'
    double p0 = 0.0;                      // in-target weight fraction
    double kept_weight = 0.0;
    double cut_weight = 0.0;
    double filtered_weight = 0.0;         // sum w R
    std::uint64_t queries_naive = 0;      // ceil(p0^-1/2 beta N')
    std::uint64_t queries_filtered = 0;   // ceil(p0^-1/2 N + beta N')
};

namespace detail {

// Weighted sum of per-line probability curves, reduced over lines by a fixed
// pairwise tree (bitwise reproducible for any thread count).
inline std::vector<double> weighted_estimator(const std::vector<double>& energies,
                                              const std::vector<double>& weights,
                                              const Window& window, const QpeGrid& grid) {
    const std::size_t n_lines = energies.size();
    const std::size_t n = grid.size;
    std::vector<std::vector<double>> terms(n_lines);
    parallel_for(n_lines, [&](std::size_t i) {
        const ResponseCurve curve = amplitude(window, grid, energies[i]);
        terms[i].resize(n);
        for (std::size_t y = 0; y < n; ++y) terms[i][y] = weights[i] * curve.probs[y];
    });
    std::vector<double> column(n_lines);
    std::vector<double> out(n, 0.0);
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t i = 0; i < n_lines; ++i) column[i] = terms[i][y];
        out[y] = pairwise_sum(column);
    }
    return out;
}

}  // namespace detail

/// S~(y) = sum_mu weight_mu P_mu(y) on the given grid.
inline std::vector<double> estimator(const Spectrum& spectrum, const Window& window, const QpeGrid& grid) {
    if (spectrum.lines.empty()) throw std::invalid_argument("estimator: empty spectrum");
    std::vector<double> energies(spectrum.lines.size()), weights(spectrum.lines.size());
    for (std::size_t i = 0; i < spectrum.lines.size(); ++i) {
        energies[i] = spectrum.lines[i].energy;
        weights[i] = spectrum.lines[i].weight;
    }
    return detail::weighted_estimator(energies, weights, window, grid);
}

inline SpectralResult two_step(const Spectrum& spectrum, const TwoStepConfig& config) {
    if (spectrum.lines.empty()) throw std::invalid_argument("two_step: empty spectrum");
    if (!(config.stage1_grid.T > 0.0) || !(config.stage2_grid.T > 0.0))
        throw std::invalid_argument("two_step: time steps must be positive");

    const std::size_t n_lines = spectrum.lines.size();
    std::vector<double> energies(n_lines), weights(n_lines);
    for (std::size_t i = 0; i < n_lines; ++i) {
        const double e = spectrum.lines[i].energy;
        energies[i] = config.negate_energies ? -e : e;
        weights[i] = spectrum.lines[i].weight;
    }

    std::vector<double> renorm(n_lines);
    std::vector<char> kept(n_lines);
    detail::parallel_for(n_lines, [&](std::size_t i) {
        renorm[i] = renormalization(config.stage1_window, config.stage1_grid, config.cutoff, energies[i]).R;
        kept[i] = reduce_energy(energies[i], config.stage1_grid) <= config.cutoff.omega_c ? 1 : 0;
    });

    SpectralResult result;
    const std::size_t n2 = config.stage2_grid.size;
    result.omega.resize(n2);
    for (std::size_t y = 0; y < n2; ++y) {
        const double w = config.stage2_grid.omega(static_cast<double>(y));
        result.omega[y] = config.negate_energies ? -w : w;
    }

    std::vector<double> w_filtered(n_lines), w_err_kept(n_lines), w_err_cut(n_lines), w_kept_only(n_lines);
    for (std::size_t i = 0; i < n_lines; ++i) {
        w_filtered[i] = weights[i] * renorm[i];
        w_err_kept[i] = kept[i] ? weights[i] * (1.0 - renorm[i]) : 0.0;
        w_err_cut[i] = kept[i] ? 0.0 : weights[i] * renorm[i];
        w_kept_only[i] = kept[i] ? weights[i] : 0.0;
        if (kept[i]) result.kept_weight += weights[i];
        else result.cut_weight += weights[i];
        result.filtered_weight += w_filtered[i];
    }

    result.raw = detail::weighted_estimator(energies, weights, config.stage2_window, config.stage2_grid);
    result.filtered = detail::weighted_estimator(energies, w_filtered, config.stage2_window, config.stage2_grid);
    result.error_kept = detail::weighted_estimator(energies, w_err_kept, config.stage2_window, config.stage2_grid);
    result.error_cut = detail::weighted_estimator(energies, w_err_cut, config.stage2_window, config.stage2_grid);

    result.filtered_normalized.resize(n2);
    const double norm = result.filtered_weight > 0.0 ? 1.0 / result.filtered_weight : 0.0;
    for (std::size_t y = 0; y < n2; ++y) result.filtered_normalized[y] = result.filtered[y] * norm;

    const double total = result.kept_weight + result.cut_weight;
    result.p0 = total > 0.0 ? result.kept_weight / total : 0.0;
    if (!(result.p0 > 0.0))
        throw std::domain_error("two_step: no weight inside the target region (p0 = 0)");
    const double n1 = static_cast<double>(config.stage1_grid.size);
    const double n2d = static_cast<double>(n2);
    const double root = 1.0 / std::sqrt(result.p0);
    result.queries_naive = static_cast<std::uint64_t>(std::ceil(root * config.beta() * n2d));
    result.queries_filtered = static_cast<std::uint64_t>(std::ceil(root * n1 + config.beta() * n2d));
    return result;
}

/// The kept-side/cut-side split of the deviation from the kept-only
/// reference D~: filtered - D~ = error_cut - error_kept elementwise.
inline std::pair<std::vector<double>, std::vector<double>> error_decomposition(const SpectralResult& result) {
    return {result.error_kept, result.error_cut};
}

/// Local maxima of `values` with prominence above `threshold`; returns bin
/// indices. Used to locate aliasing replicas of cut-side lines.
inline std::vector<std::size_t> detect_peaks(const std::vector<double>& values, double threshold) {
    std::vector<std::size_t> peaks;
    for (std::size_t y = 0; y < values.size(); ++y) {
        const double left = y > 0 ? values[y - 1] : -1.0;
        const double right = y + 1 < values.size() ? values[y + 1] : -1.0;
        if (values[y] > threshold && values[y] >= left && values[y] > right) peaks.push_back(y);
    }
    return peaks;
}

}  // namespace qpefl
