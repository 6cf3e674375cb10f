#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpefl::detail {

// Revised primal simplex on the standard form
//     min g^T x   s.t.   D x = d,  x >= 0,
// with dense column access supplied by the problem. The inverse basis is
// kept explicitly and refreshed from scratch periodically to bound drift.
// Pivot selection is Dantzig with smallest-index ties, falling back to
// Bland's rule after a stall threshold so the iteration terminates.
//
// The minimax fit uses this on the dual of
//     min_t  c^T x  s.t.  A x <= b            (x free)
// whose dual reads  min b^T lambda  s.t.  A^T lambda = -c, lambda >= 0;
// the simplex multipliers y at optimality solve the original problem.

struct SimplexOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 200000;
    std::size_t refactor_every = 100;
};

struct SimplexOutcome {
    bool optimal = false;
    std::string status;           // "optimal", "iteration limit", "unbounded"
    double objective = 0.0;       // g^T x at the final basis
    std::vector<double> multipliers;  // y = B^{-T} g_B
    std::size_t iterations = 0;
};

// Problem interface: rows() constraints, cols() variables,
// cost(j), column(j, out), and price(y, skip_basic) returning the entering
// column index (most negative reduced cost) or -1 if none.
template <typename Problem>
class RevisedSimplex {
  public:
    RevisedSimplex(const Problem& p, SimplexOptions opt) : p_(p), opt_(opt) {}

    // basis: m column indices forming a feasible basis; x_basic: the matching
    // basic values (B^{-1} d), all >= 0.
    SimplexOutcome solve(std::vector<long> basis, std::vector<double> x_basic) {
        const std::size_t m = p_.rows();
        if (basis.size() != m || x_basic.size() != m)
            throw std::invalid_argument("simplex: basis size mismatch");
        basis_ = std::move(basis);
        xb_ = std::move(x_basic);
        binv_.assign(m * m, 0.0);
        refactor();
        std::vector<char> is_basic(p_.cols(), 0);
        for (long j : basis_) is_basic[static_cast<std::size_t>(j)] = 1;

        SimplexOutcome out;
        std::vector<double> y(m), col(m), chi(m);
        bool bland = false;
        std::size_t since_refactor = 0;
        const std::size_t bland_after = 40 * m + 4000;

        for (std::size_t it = 0; it < opt_.max_iterations; ++it) {
            if (it == bland_after) bland = true;
            // y = B^{-T} g_B
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (std::size_t r = 0; r < m; ++r) acc += binv_[r * m + i] * p_.cost(basis_[r]);
                y[i] = acc;
            }
            const long enter = p_.price(y, opt_.tol, bland, is_basic);
            if (enter < 0) {
                out.optimal = true;
                out.status = "optimal";
                out.iterations = it;
                break;
            }
            p_.column(enter, col.data());
            // chi = B^{-1} a_enter
            for (std::size_t r = 0; r < m; ++r) {
                double acc = 0.0;
                for (std::size_t ccol = 0; ccol < m; ++ccol) acc += binv_[r * m + ccol] * col[ccol];
                chi[r] = acc;
            }
            long leave = -1;
            double theta = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r) {
                if (chi[r] > opt_.tol) {
                    const double ratio = xb_[r] / chi[r];
                    if (ratio < theta - 1e-15 ||
                        (ratio < theta + 1e-15 && (leave < 0 || basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]))) {
                        theta = ratio;
                        leave = static_cast<long>(r);
                    }
                }
            }
            if (leave < 0) {
                out.status = "unbounded";
                out.iterations = it;
                break;
            }
            const std::size_t lr = static_cast<std::size_t>(leave);
            // update basic values and the explicit inverse (pivot row lr)
            for (std::size_t r = 0; r < m; ++r) xb_[r] -= theta * chi[r];
            xb_[lr] = theta;
            const double piv = chi[lr];
            for (std::size_t ccol = 0; ccol < m; ++ccol) binv_[lr * m + ccol] /= piv;
            for (std::size_t r = 0; r < m; ++r) {
                if (r == lr || chi[r] == 0.0) continue;
                const double f = chi[r];
                for (std::size_t ccol = 0; ccol < m; ++ccol)
                    binv_[r * m + ccol] -= f * binv_[lr * m + ccol];
            }
            is_basic[static_cast<std::size_t>(basis_[lr])] = 0;
            is_basic[static_cast<std::size_t>(enter)] = 1;
            basis_[lr] = enter;
            if (++since_refactor >= opt_.refactor_every) {
                refactor();
                recompute_xb();
                since_refactor = 0;
            }
        }
        if (out.status.empty()) out.status = "iteration limit";

        const std::size_t mm = p_.rows();
        out.multipliers.assign(mm, 0.0);
        for (std::size_t i = 0; i < mm; ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < mm; ++r) acc += binv_[r * mm + i] * p_.cost(basis_[r]);
            out.multipliers[i] = acc;
        }
        double obj = 0.0;
        for (std::size_t r = 0; r < mm; ++r) obj += p_.cost(basis_[r]) * xb_[r];
        out.objective = obj;
        return out;
    }

  private:
    // Rebuild binv_ = B^{-1} by Gauss-Jordan with partial pivoting.
    void refactor() {
        const std::size_t m = p_.rows();
        std::vector<double> B(m * m);
        std::vector<double> col(m);
        for (std::size_t c = 0; c < m; ++c) {
            p_.column(basis_[c], col.data());
            for (std::size_t r = 0; r < m; ++r) B[r * m + c] = col[r];
        }
        std::vector<double> inv(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < m; ++r)
                if (std::fabs(B[r * m + c]) > std::fabs(B[piv * m + c])) piv = r;
            if (std::fabs(B[piv * m + c]) < 1e-14)
                throw std::runtime_error("simplex: singular basis during refactorization");
            if (piv != c) {
                for (std::size_t k = 0; k < m; ++k) {
                    std::swap(B[piv * m + k], B[c * m + k]);
                    std::swap(inv[piv * m + k], inv[c * m + k]);
                }
            }
            const double s = 1.0 / B[c * m + c];
            for (std::size_t k = 0; k < m; ++k) {
                B[c * m + k] *= s;
                inv[c * m + k] *= s;
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (r == c) continue;
                const double f = B[r * m + c];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m; ++k) {
                    B[r * m + k] -= f * B[c * m + k];
                    inv[r * m + k] -= f * inv[c * m + k];
                }
            }
        }
        binv_ = std::move(inv);
    }

    void recompute_xb() {
        const std::size_t m = p_.rows();
        std::vector<double> d;
        p_.rhs(d);
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < m; ++c) acc += binv_[r * m + c] * d[c];
            xb_[r] = std::max(acc, 0.0);
        }
    }

    const Problem& p_;
    SimplexOptions opt_;
    std::vector<long> basis_;
    std::vector<double> xb_;
    std::vector<double> binv_;
};

}  // namespace qpefl::detail
