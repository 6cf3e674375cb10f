#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpefl/bessel.hpp"
#include "qpefl/common.hpp"
#include "qpefl/grid.hpp"

namespace qpefl {

enum class WindowKind { rectangular, sine, kaiser };

inline const char* to_string(WindowKind k) {
    switch (k) {
        case WindowKind::rectangular: return "rectangular";
        case WindowKind::sine: return "sine";
        case WindowKind::kaiser: return "kaiser";
    }
    return "?";
}

/// Input-state coefficient profile a_j on the ancilla register,
/// L2-normalized so that sum_j a_j^2 = 1.
struct Window {
    WindowKind kind = WindowKind::rectangular;
    double alpha = 0.0;  // Kaiser shape parameter; unused otherwise
    std::vector<double> coeffs;

    std::size_t size() const { return coeffs.size(); }
};

/// Builds the window coefficients for a grid. The Kaiser profile is
/// a_j ~ I0(pi*alpha*sqrt(1 - (2j/N - 1)^2)) with j = 0..N-1; only the
/// proportionality is fixed by that form, so the vector is normalized here.
inline Window make_window(WindowKind kind, const QpeGrid& grid, double alpha = 0.0) {
    const std::size_t n = grid.size;
    Window w;
    w.kind = kind;
    w.coeffs.resize(n);
    switch (kind) {
        case WindowKind::rectangular:
            for (auto& c : w.coeffs) c = 1.0;
            break;
        case WindowKind::sine:
            for (std::size_t j = 0; j < n; ++j)
                w.coeffs[j] = std::sin(pi * static_cast<double>(j) / static_cast<double>(n));
            break;
        case WindowKind::kaiser: {
            if (!(alpha > 0.0) || !std::isfinite(alpha))
                throw std::invalid_argument("make_window: kaiser alpha must be positive");
            w.alpha = alpha;
            for (std::size_t j = 0; j < n; ++j) {
                const double r = 2.0 * static_cast<double>(j) / static_cast<double>(n) - 1.0;
                const double arg2 = 1.0 - r * r;
                w.coeffs[j] = bessel_i0(pi * alpha * std::sqrt(arg2 > 0.0 ? arg2 : 0.0));
            }
            break;
        }
    }
    double norm2 = 0.0;
    for (double c : w.coeffs) norm2 += c * c;
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : w.coeffs) c *= inv;
    return w;
}

inline WindowKind parse_window_kind(const std::string& s) {
    if (s == "rect" || s == "rectangular") return WindowKind::rectangular;
    if (s == "sine") return WindowKind::sine;
    if (s == "kaiser") return WindowKind::kaiser;
    throw std::invalid_argument("unknown window kind '" + s + "' (expected rect|sine|kaiser)");
}

}  // namespace qpefl
