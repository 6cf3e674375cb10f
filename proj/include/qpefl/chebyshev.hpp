#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qpefl {

/// Even Chebyshev series f(w) = sum_{l=0}^{d/2} c_{2l} T_{2l}(w). Evaluation
/// substitutes u = 2w^2 - 1 (T_{2l}(w) = T_l(u)) and runs the Clenshaw
/// backward recurrence in u, which keeps the series stable on [-1, 1].
struct ChebyshevEvenPoly {
    int degree = 0;                // even
    std::vector<double> coeffs;    // c_0, c_2, ..., c_degree

    double eval(double w) const {
        const double u = 2.0 * w * w - 1.0;
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 1;) {
            const double next = 2.0 * u * b1 - b2 + coeffs[i];
            b2 = b1;
            b1 = next;
        }
        return u * b1 - b2 + coeffs[0];
    }

    double operator()(double w) const { return eval(w); }
};

inline ChebyshevEvenPoly make_even_poly(int degree, std::vector<double> coeffs) {
    if (degree < 0 || degree % 2 != 0)
        throw std::invalid_argument("ChebyshevEvenPoly: degree must be even and non-negative");
    if (coeffs.size() != static_cast<std::size_t>(degree / 2 + 1))
        throw std::invalid_argument("ChebyshevEvenPoly: coefficient count must be degree/2 + 1");
    return ChebyshevEvenPoly{degree, std::move(coeffs)};
}

namespace detail {

// Row T_0(w), T_2(w), ..., T_{2(k-1)}(w) via the recurrence in u = 2w^2 - 1.
inline void cheb_even_row(double w, std::size_t k, double* out) {
    const double u = 2.0 * w * w - 1.0;
    if (k > 0) out[0] = 1.0;
    if (k > 1) out[1] = u;
    for (std::size_t l = 2; l < k; ++l) out[l] = 2.0 * u * out[l - 1] - out[l - 2];
}

}  // namespace detail

}  // namespace qpefl
