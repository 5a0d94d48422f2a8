#pragma once

#include <cmath>
#include <limits>

#include "qn/core/errors.hpp"

namespace qn {

// Adaptive Gauss-Kronrod (7-15) quadrature. One engine serves every 1D
// integral in the library: ellipsoid integrals, Z-map, radial masses and
// the test oracles.

namespace detail {

// Kronrod 15 nodes/weights on [-1,1] and the embedded Gauss-7 weights.
inline constexpr double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};

inline constexpr double kKronrodW[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};

inline constexpr double kGaussW[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <typename F>
void gk15_panel(const F& f, double a, double b, double& result, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double fx = f(mid + half * kGK15Nodes[i]);
        kron += kKronrodW[i] * fx;
        if (i % 2 == 1) gauss += kGaussW[i / 2] * fx;
    }
    result = kron * half;
    err = std::abs((kron - gauss) * half);
}

template <typename F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, double abs_tol,
                   int depth) {
    double result, err;
    gk15_panel(f, a, b, result, err);
    if (err <= abs_tol || err <= rel_tol * std::abs(result) || depth >= 48 ||
        b - a < 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b)))
        return result;
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, rel_tol, 0.5 * abs_tol, depth + 1) +
           adaptive_gk(f, mid, b, rel_tol, 0.5 * abs_tol, depth + 1);
}

} // namespace detail

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-300) {
    if (a == b) return 0.0;
    return detail::adaptive_gk(f, a, b, rel_tol, abs_tol, 0);
}

// Integral over [a, infinity). The tail is mapped by s = a + (u/(1-u))^2,
// which turns integrands with half-integer power-law decay s^{-p}, p >= 3/2,
// into smooth functions of u on [0,1).
template <typename F>
double integrate_half_line(const F& f, double a, double rel_tol = 1e-12) {
    auto mapped = [&](double u) {
        const double onemu = 1.0 - u;
        const double r = u / onemu;
        const double s = a + r * r;
        const double jac = 2.0 * u / (onemu * onemu * onemu);
        return f(s) * jac;
    };
    // Gauss-Kronrod nodes never touch panel endpoints, so u = 1 (s = inf)
    // is never evaluated and no tail is truncated.
    return integrate(mapped, 0.0, 1.0, rel_tol);
}

} // namespace qn
