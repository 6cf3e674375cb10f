#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qpefl/chebyshev.hpp"
#include "qpefl/common.hpp"
#include "qpefl/filter.hpp"
#include "qpefl/grid.hpp"
#include "qpefl/linprog.hpp"
#include "qpefl/response.hpp"

namespace qpefl {

/// Step-filter target for the eigenvalue-transform comparison. F(E) acts on
/// squared amplitudes, so the fitted f(w), w = cos(ET/4), aims at the plateau
/// value c = (1 + sqrt(1-eps))/2 on [w_plus, 1] and at 0 on [0, w_minus];
/// then F(E) = |f(cos(ET/4))|^2 satisfies the pass/stop conditions.
struct QetuSpec {
    double e_targ = 0.0;
    double two_delta = 0.0;
    double epsilon = 0.0;
    double T = 1.0;
    double c_val = 0.0;
    double w_plus = 0.0;
    double w_minus = 0.0;
};

inline QetuSpec make_qetu_spec(double e_targ, double two_delta, double epsilon, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("qetu spec: T must be positive");
    if (!(e_targ > 0.0)) throw std::invalid_argument("qetu spec: E_targ must be positive");
    if (!(two_delta > 0.0)) throw std::invalid_argument("qetu spec: transition width must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("qetu spec: epsilon must be in (0, 1)");
    if (!(e_targ + two_delta < two_pi / T))
        throw std::invalid_argument("qetu spec: E_targ + 2*delta must stay below 2*pi/T");
    QetuSpec s{e_targ, two_delta, epsilon, T, 0.0, 0.0, 0.0};
    s.c_val = 0.5 * (1.0 + std::sqrt(1.0 - epsilon));
    s.w_plus = std::cos(e_targ * T / 4.0);
    s.w_minus = std::cos((e_targ + two_delta) * T / 4.0);
    return s;
}

struct CertViolation {
    double energy = 0.0;
    int condition = 0;  // 1: |F|<=1, 2: plateau, 3: stopband
    double excess = 0.0;
};

struct FitReport {
    double residual = 0.0;  // achieved minimax value t*
    bool pass = false;
    std::vector<CertViolation> violations;
    int query_count = 0;  // d/2
    double max_f_sq = 0.0;       // dense-grid max of F
    double plateau_min_f_sq = 1.0;
    double stop_max_f_sq = 0.0;
};

namespace detail {

// Columns of the dual of the minimax fit. Blocks, in fixed index order:
// plateau +/- (|f - c| <= t), stop +/- (|f| <= t), box +/- (|f| <= 1).
class MinimaxFitProblem {
  public:
    MinimaxFitProblem(const QetuSpec& spec, int degree, std::size_t grid_count)
        : k_(static_cast<std::size_t>(degree / 2 + 1)), m_count_(grid_count), c_val_(spec.c_val) {
        if (degree < 2 || grid_count < 2) throw std::invalid_argument("minimax fit: degenerate problem size");
        w_.resize(grid_count);
        for (std::size_t m = 0; m < grid_count; ++m)
            w_[m] = static_cast<double>(m) / static_cast<double>(grid_count - 1);
        cheb_.resize(grid_count * k_);
        for (std::size_t m = 0; m < grid_count; ++m)
            cheb_even_row(w_[m], k_, &cheb_[m * k_]);
        for (std::size_t m = 0; m < grid_count; ++m) {
            if (w_[m] >= spec.w_plus) plateau_.push_back(m);
            if (w_[m] <= spec.w_minus) stop_.push_back(m);
        }
        offsets_[0] = 0;
        offsets_[1] = offsets_[0] + plateau_.size();
        offsets_[2] = offsets_[1] + plateau_.size();
        offsets_[3] = offsets_[2] + stop_.size();
        offsets_[4] = offsets_[3] + stop_.size();
        offsets_[5] = offsets_[4] + m_count_;
        total_ = offsets_[5] + m_count_;
        s_.resize(m_count_);
    }

    std::size_t rows() const { return k_ + 1; }
    std::size_t cols() const { return total_; }

    double cost(long j) const {
        const auto [block, m] = decode(j);
        switch (block) {
            case 0: return c_val_;
            case 1: return -c_val_;
            case 2: case 3: return 0.0;
            default: return 1.0;
        }
    }

    void column(long j, double* out) const {
        const auto [block, m] = decode(j);
        const bool neg = (block == 1 || block == 3 || block == 5);
        const bool has_t = (block <= 3);
        const double* row = &cheb_[m * k_];
        for (std::size_t l = 0; l < k_; ++l) out[l] = neg ? -row[l] : row[l];
        out[k_] = has_t ? -1.0 : 0.0;
    }

    void rhs(std::vector<double>& out) const {
        out.assign(k_ + 1, 0.0);
        out[k_] = -1.0;
    }

    long price(const std::vector<double>& y, double tol, bool bland,
               const std::vector<char>& is_basic) const {
        for (std::size_t m = 0; m < m_count_; ++m) {
            double acc = 0.0;
            const double* row = &cheb_[m * k_];
            for (std::size_t l = 0; l < k_; ++l) acc += y[l] * row[l];
            s_[m] = acc;
        }
        const double yt = y[k_];
        long best = -1;
        double best_r = -tol;
        auto consider = [&](long j, double r) -> bool {
            if (r < best_r && !is_basic[static_cast<std::size_t>(j)]) {
                best_r = r;
                best = j;
                return bland;  // Bland: accept the first eligible index
            }
            return false;
        };
        for (std::size_t i = 0; i < plateau_.size(); ++i) {
            const double s = s_[plateau_[i]];
            if (consider(static_cast<long>(offsets_[0] + i), c_val_ - s + yt)) return best;
            if (consider(static_cast<long>(offsets_[1] + i), -c_val_ + s + yt)) return best;
        }
        for (std::size_t i = 0; i < stop_.size(); ++i) {
            const double s = s_[stop_[i]];
            if (consider(static_cast<long>(offsets_[2] + i), -s + yt)) return best;
            if (consider(static_cast<long>(offsets_[3] + i), s + yt)) return best;
        }
        for (std::size_t m = 0; m < m_count_; ++m) {
            if (consider(static_cast<long>(offsets_[4] + m), 1.0 - s_[m])) return best;
            if (consider(static_cast<long>(offsets_[5] + m), 1.0 + s_[m])) return best;
        }
        return best;
    }

    // Feasible degenerate start: the pair of plateau constraints at w = 1
    // with multipliers 1/2 each, padded with box columns at cos-spaced grid
    // points (a Chebyshev-Vandermonde completion, hence nonsingular).
    std::pair<std::vector<long>, std::vector<double>> initial_basis() const {
        const std::size_t one = plateau_.size() - 1;  // w = 1 is the last plateau point
        std::vector<long> basis{static_cast<long>(offsets_[0] + one),
                                static_cast<long>(offsets_[1] + one)};
        std::vector<bool> used(m_count_, false);
        used[m_count_ - 1] = true;
        for (std::size_t i = 0; i + 2 < rows(); ++i) {
            const double w = std::cos(pi * (static_cast<double>(i) + 0.5) / (2.0 * static_cast<double>(rows() - 2)));
            std::size_t m = static_cast<std::size_t>(std::lround(w * static_cast<double>(m_count_ - 1)));
            while (m < m_count_ && used[m]) ++m;
            if (m >= m_count_) {
                m = m_count_ - 1;
                while (m > 0 && used[m]) --m;
            }
            used[m] = true;
            basis.push_back(static_cast<long>(offsets_[4] + m));
        }
        std::vector<double> xb(rows(), 0.0);
        xb[0] = 0.5;
        xb[1] = 0.5;
        return {std::move(basis), std::move(xb)};
    }

  private:
    std::pair<int, std::size_t> decode(long j) const {
        const std::size_t u = static_cast<std::size_t>(j);
        if (u < offsets_[1]) return {0, plateau_[u - offsets_[0]]};
        if (u < offsets_[2]) return {1, plateau_[u - offsets_[1]]};
        if (u < offsets_[3]) return {2, stop_[u - offsets_[2]]};
        if (u < offsets_[4]) return {3, stop_[u - offsets_[3]]};
        if (u < offsets_[5]) return {4, u - offsets_[4]};
        return {5, u - offsets_[5]};
    }

    std::size_t k_;
    std::size_t m_count_;
    double c_val_;
    std::vector<double> w_;
    std::vector<double> cheb_;  // row-major M x K
    std::vector<std::size_t> plateau_, stop_;
    std::size_t offsets_[6] = {};
    std::size_t total_ = 0;
    mutable std::vector<double> s_;
};

}  // namespace detail

/// Discretized minimax fit (Chebyshev coefficients of even degree d over M
/// uniform points in [0,1]), solved as a linear program. Returns the
/// polynomial together with its dense-grid certification report.
inline std::pair<ChebyshevEvenPoly, FitReport> fit_polynomial(const QetuSpec& spec, int degree, std::size_t grid_count);

/// Dense-grid certification of F(E) = f(cos(ET/4))^2 on 100,000 uniform
/// points over [0, 2*pi/T], with golden-section refinement of each
/// near-violation (any point within a factor 10 of its bound). The bound
/// checks carry a 1e-9 allowance matching the LP solver tolerance.
inline FitReport certify(const ChebyshevEvenPoly& poly, const QetuSpec& spec) {
    constexpr std::size_t n_pts = 100000;
    constexpr double slack = 1e-9;
    const double span = two_pi / spec.T;
    FitReport report;
    report.query_count = poly.degree / 2;

    std::vector<double> F(n_pts);
    detail::parallel_for(n_pts, [&](std::size_t i) {
        const double e = span * static_cast<double>(i) / static_cast<double>(n_pts - 1);
        const double f = poly.eval(std::cos(e * spec.T / 4.0));
        F[i] = f * f;
    });
    const double step = span / static_cast<double>(n_pts - 1);
    const auto f_sq_at = [&](double e) {
        const double f = poly.eval(std::cos(e * spec.T / 4.0));
        return f * f;
    };
    // maximize `fn` by golden section on [lo, hi]
    const auto refine_max = [&](double lo, double hi, auto&& fn) {
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = fn(x1), f2 = fn(x2);
        double best = std::max(fn(lo), fn(hi));
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = fn(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = fn(x1);
            }
        }
        return std::max({best, f1, f2});
    };

    // condition kind: 1 on all E (F <= 1), 2 on [0, E_targ] (1-F <= eps),
    // 3 on [E_targ + 2 delta, span] (F <= eps)
    struct Region { int kind; double lo, hi, bound; };
    const Region regions[3] = {
        {1, 0.0, span, 1.0},
        {2, 0.0, spec.e_targ, spec.epsilon},
        {3, spec.e_targ + spec.two_delta, span, spec.epsilon},
    };
    for (const Region& reg : regions) {
        const auto value = [&](double e) { return reg.kind == 2 ? 1.0 - f_sq_at(e) : f_sq_at(e); };
        const std::size_t i_lo = static_cast<std::size_t>(std::ceil(reg.lo / step - 1e-9));
        const std::size_t i_hi = static_cast<std::size_t>(std::floor(reg.hi / step + 1e-9));
        double worst = -1.0;
        double worst_e = reg.lo;
        for (std::size_t i = i_lo; i <= i_hi && i < n_pts; ++i) {
            const double v = reg.kind == 2 ? 1.0 - F[i] : F[i];
            if (v > worst) { worst = v; worst_e = step * static_cast<double>(i); }
            const bool local_max = (i == i_lo || (reg.kind == 2 ? 1.0 - F[i - 1] : F[i - 1]) <= v) &&
                                   (i == i_hi || i + 1 >= n_pts || (reg.kind == 2 ? 1.0 - F[i + 1] : F[i + 1]) <= v);
            if (!local_max || v < reg.bound / 10.0) continue;
            const double e = step * static_cast<double>(i);
            const double lo = std::max(reg.lo, e - 2.0 * step);
            const double hi = std::min(reg.hi, e + 2.0 * step);
            const double refined = refine_max(lo, hi, value);
            if (refined > worst) { worst = refined; worst_e = e; }
        }
        if (reg.kind == 1) report.max_f_sq = worst;
        if (reg.kind == 2) report.plateau_min_f_sq = 1.0 - worst;
        if (reg.kind == 3) report.stop_max_f_sq = worst;
        if (worst > reg.bound + slack)
            report.violations.push_back({worst_e, reg.kind, worst - reg.bound});
    }
    report.pass = report.violations.empty();
    return report;
}

inline std::pair<ChebyshevEvenPoly, FitReport> fit_polynomial(const QetuSpec& spec, int degree, std::size_t grid_count) {
    if (degree < 2 || degree % 2 != 0)
        throw std::invalid_argument("fit_polynomial: degree must be even and >= 2");
    if (grid_count < static_cast<std::size_t>(degree))
        throw std::invalid_argument("fit_polynomial: fewer sampled points than the requested degree");

    detail::MinimaxFitProblem problem(spec, degree, grid_count);
    detail::RevisedSimplex<detail::MinimaxFitProblem> simplex(problem, detail::SimplexOptions{});
    auto [basis, xb] = problem.initial_basis();
    const detail::SimplexOutcome outcome = simplex.solve(std::move(basis), std::move(xb));
    if (!outcome.optimal)
        throw std::runtime_error("fit_polynomial: LP solver failed (" + outcome.status + ")");

    std::vector<double> coeffs(outcome.multipliers.begin(), outcome.multipliers.end() - 1);
    ChebyshevEvenPoly poly = make_even_poly(degree, std::move(coeffs));
    FitReport report = certify(poly, spec);
    report.residual = outcome.multipliers.back();
    return {std::move(poly), std::move(report)};
}

/// Smallest even degree whose fit passes certification: exponential
/// bracketing over d = 8, 16, 32, ... followed by a binary search on even
/// degrees. Degrees above the sample count or above 4096 end the search.
inline std::pair<int, FitReport> minimal_degree(const QetuSpec& spec, std::size_t grid_count) {
    constexpr int cap = 4096;
    int lo = 0;
    int hi = -1;
    FitReport hi_report;
    for (int d = 8; d <= cap; d *= 2) {
        if (grid_count < static_cast<std::size_t>(d))
            throw std::runtime_error("minimal_degree: no fit found before exceeding the sample count M=" +
                                     std::to_string(grid_count) + " (last failing degree " + std::to_string(lo) + ")");
        auto [poly, report] = fit_polynomial(spec, d, grid_count);
        if (report.pass) {
            hi = d;
            hi_report = std::move(report);
            break;
        }
        lo = d;
    }
    if (hi < 0)
        throw std::runtime_error("minimal_degree: no passing degree up to the search cap " + std::to_string(cap));
    while (hi - lo > 2) {
        const int mid = ((lo + hi) / 2 + 1) / 2 * 2;
        auto [poly, report] = fit_polynomial(spec, mid, grid_count);
        if (report.pass) {
            hi = mid;
            hi_report = std::move(report);
        } else {
            lo = mid;
        }
    }
    return {hi, std::move(hi_report)};
}

/// Query count of the phase-estimation route for the same (2 delta, eps)
/// target: the smallest N = 2^n (cutoff y_c = 2^(n-2) - 1) whose Kaiser
/// filter, with the smallest alpha meeting eps, has a measured transition
/// no wider than the requested one. The comparison carries a 5% allowance
/// for the scan resolution of the transition measurement.
inline std::size_t queries_qpe_kaiser(const QetuSpec& spec) {
    for (int n = 3; n <= 12; ++n) {
        const QpeGrid grid = make_grid(n, spec.T);
        const std::size_t y_c = (std::size_t{1} << (n - 2)) - 1;
        if (y_c == 0) continue;
        const FilterConfig config = make_filter_config(grid, y_c);
        std::optional<double> alpha;
        for (double a = 0.5; a <= 12.0; a += 0.5) {
            if (static_cast<double>(y_c) <= std::ceil(2.0 * a)) break;
            if (kaiser_eps_max(a, grid) <= spec.epsilon) {
                alpha = a;
                break;
            }
        }
        if (!alpha) continue;
        const KaiserFilterParams params = kaiser_params(*alpha, grid, config, spec.epsilon);
        if (2.0 * params.transition_meas <= spec.two_delta * 1.05) return grid.size;
    }
    throw std::runtime_error("queries_qpe_kaiser: no grid up to n=12 achieves the requested transition");
}

}  // namespace qpefl
