#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qpefl/common.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/window.hpp"

namespace qpefl {

/// Exact pre-measurement state sum_{y,mu} C_mu A_mu(y) |y>|phi_mu> for a
/// diagonal Hamiltonian, built by explicit window preparation, phase
/// accumulation, and a dense inverse-QFT application. Deliberately shares no
/// code with the transform-based response path, so it can act as an
/// independent check of it.
struct JointState {
    QpeGrid grid;
    std::size_t n_states = 0;
    std::vector<cplx> weights;      // C_mu
    std::vector<cplx> amplitudes;   // [y * n_states + mu] = C_mu A_mu(y)

    cplx at(std::size_t y, std::size_t mu) const { return amplitudes[y * n_states + mu]; }

    double total_probability() const {
        std::vector<double> terms(amplitudes.size());
        for (std::size_t i = 0; i < amplitudes.size(); ++i) terms[i] = std::norm(amplitudes[i]);
        return detail::pairwise_sum(terms);
    }
};

/// The inverse-QFT matrix is applied with the convention
/// Q^{-1}[y, j] = e^{-2 pi i y j / N} / sqrt(N), which makes the column for
/// state mu equal A_mu(y) of the response model exactly.
inline JointState build_state(const Window& window, const QpeGrid& grid,
                              const std::vector<double>& energies, const std::vector<cplx>& weights) {
    if (window.size() != grid.size)
        throw std::invalid_argument("build_state: window length does not match grid size");
    if (energies.size() != weights.size())
        throw std::invalid_argument("build_state: energies and weights must have equal length");
    if (energies.empty()) throw std::invalid_argument("build_state: empty spectrum");
    if (grid.n > 12) throw std::invalid_argument("build_state: resource cap n <= 12");
    if (energies.size() > 4096) throw std::invalid_argument("build_state: resource cap 4096 states");
    double wnorm = 0.0;
    for (const cplx& c : weights) wnorm += std::norm(c);
    if (std::fabs(wnorm - 1.0) > 1e-10)
        throw std::invalid_argument("build_state: weights must satisfy sum |C|^2 = 1 within 1e-10");

    const std::size_t n = grid.size;
    const std::size_t s = energies.size();
    JointState state;
    state.grid = grid;
    state.n_states = s;
    state.weights = weights;
    state.amplitudes.assign(n * s, cplx{});

    std::vector<cplx> qft_tw(n);
    for (std::size_t k = 0; k < n; ++k)
        qft_tw[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    detail::parallel_for(s, [&](std::size_t mu) {
        std::vector<cplx> prepared(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = std::fmod(energies[mu] * grid.T * static_cast<double>(j), two_pi);
            prepared[j] = window.coeffs[j] * std::polar(1.0, phase);
        }
        std::vector<cplx> terms(n);
        for (std::size_t y = 0; y < n; ++y) {
            std::size_t idx = 0;
            for (std::size_t j = 0; j < n; ++j) {
                terms[j] = prepared[j] * qft_tw[idx];
                idx += y;
                if (idx >= n) idx -= n;
            }
            state.amplitudes[y * s + mu] = weights[mu] * scale * detail::pairwise_sum(terms);
        }
    });
    return state;
}

/// Classical post-selection on outcomes y <= y_c: for each outcome, the
/// squared amplitude of |phi_mu> in the collapsed state, weighted by the
/// conditional outcome probability and summed. The outcome-dependent
/// denominators cancel against the conditional weights, which is the
/// identity this routine exists to exhibit; the result equals
/// |C_mu|^2 R_mu / sum_mu' |C_mu'|^2 R_mu'.
inline std::vector<double> postselect_expectation(const JointState& state, std::size_t y_c) {
    if (y_c >= state.grid.size) throw std::invalid_argument("postselect_expectation: y_c out of range");
    const std::size_t s = state.n_states;

    std::vector<double> outcome_prob(y_c + 1, 0.0);
    std::vector<double> terms(s);
    for (std::size_t y = 0; y <= y_c; ++y) {
        for (std::size_t mu = 0; mu < s; ++mu) terms[mu] = std::norm(state.at(y, mu));
        outcome_prob[y] = detail::pairwise_sum(terms);
    }
    const double kept_total = detail::pairwise_sum(outcome_prob);
    // an exactly filtered state leaves only O(N eps) amplitude roundoff in
    // the kept bins; anything below that floor is an empty post-selection
    const double nd = static_cast<double>(state.grid.size);
    const double eps2 = 2.2204460492503131e-16 * 2.2204460492503131e-16;
    const double noise_floor = 16.0 * nd * static_cast<double>(y_c + 1) * eps2 * state.total_probability();
    if (!(kept_total > noise_floor))
        throw std::domain_error("postselect_expectation: empty post-selection (all outcomes filtered)");

    std::vector<double> expectation(s, 0.0);
    for (std::size_t y = 0; y <= y_c; ++y) {
        if (outcome_prob[y] == 0.0) continue;
        const double cond = outcome_prob[y] / kept_total;
        for (std::size_t mu = 0; mu < s; ++mu) {
            const double sq_amp = std::norm(state.at(y, mu)) / outcome_prob[y];
            expectation[mu] += sq_amp * cond;
        }
    }
    return expectation;
}

}  // namespace qpefl
