#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "qn/core/errors.hpp"

namespace qn {

// Safeguarded scalar root finding: bisection narrows the bracket, Newton
// polishes once the bracket is tight. f(lo) and f(hi) must have opposite
// signs (zero endpoint values are accepted).
template <typename F, typename DF>
double bisect_newton(const F& f, const DF& df, double lo, double hi,
                     double tol = 1e-14, int bisection_steps = 60,
                     int newton_steps = 8) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw domain_error("bisect_newton: endpoints do not bracket a root");

    double a = lo, b = hi;
    for (int i = 0; i < bisection_steps && (b - a) > tol * (std::abs(a) + std::abs(b) + 1.0); ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            b = mid;
        } else {
            a = mid;
            flo = fm;
        }
    }
    double x = 0.5 * (a + b);
    for (int i = 0; i < newton_steps; ++i) {
        const double fx = f(x);
        const double d = df(x);
        if (d == 0.0) break;
        const double step = fx / d;
        double xn = x - step;
        if (xn <= a || xn >= b) xn = 0.5 * (a + b); // fall back inside the bracket
        if (std::abs(xn - x) <= tol * (std::abs(x) + 1.0)) return xn;
        // keep the bracket valid
        const double fn = f(xn);
        if (fn == 0.0) return xn;
        if (flo * fn < 0.0) b = xn;
        else { a = xn; flo = fn; }
        x = xn;
    }
    return x;
}

// Bisection only, for functions without a cheap derivative.
template <typename F>
double bisect(const F& f, double lo, double hi, double tol = 1e-14, int max_steps = 200) {
    auto df = [](double) { return 0.0; };
    return bisect_newton(f, df, lo, hi, tol, max_steps, 0);
}

// Expand [lo, hi] geometrically to the right until f changes sign.
// Returns false if no sign change is found before `limit`.
template <typename F>
bool expand_bracket_up(const F& f, double& lo, double& hi, double limit = 1e12) {
    double flo = f(lo);
    if (flo == 0.0) { hi = lo; return true; }
    while (hi <= limit) {
        if (flo * f(hi) <= 0.0) return true;
        lo = hi;
        hi *= 2.0;
    }
    return false;
}

} // namespace qn
