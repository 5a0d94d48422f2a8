#pragma once

#include <array>
#include <cmath>
#include <limits>

#include "qn/core/rootfind.hpp"
#include "qn/core/vec.hpp"

namespace qn {

// Axis-aligned ellipsoid K_a = { x : sum_j x_j^2 / a_j^2 <= 1 }.
struct Ellipsoid {
    std::array<double, 3> a{1.0, 1.0, 1.0};
    int dim = 0;

    Ellipsoid(double a1) : a{a1, 1.0, 1.0}, dim(1) { validate(); }
    Ellipsoid(double a1, double a2) : a{a1, a2, 1.0}, dim(2) { validate(); }
    Ellipsoid(double a1, double a2, double a3) : a{a1, a2, a3}, dim(3) { validate(); }

    double volume() const {
        double p = 1.0;
        for (int j = 0; j < dim; ++j) p *= a[j];
        return unit_ball_volume(dim) * p;
    }

    double max_axis() const {
        double m = 0.0;
        for (int j = 0; j < dim; ++j) m = std::max(m, a[j]);
        return m;
    }

    bool contains(const Vec& x) const {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += x[j] * x[j] / (a[j] * a[j]);
        return s <= 1.0;
    }

    // Outward normal direction (not normalized) of the level ellipse through x.
    Vec normal_direction(const Vec& x) const {
        Vec n = Vec::zero(dim);
        for (int j = 0; j < dim; ++j) n[j] = x[j] / (a[j] * a[j]);
        return n;
    }

private:
    void validate() const {
        for (int j = 0; j < dim; ++j)
            if (!(a[j] > 0.0)) throw domain_error("Ellipsoid: semi-axes must be positive");
    }
};

// Ellipsoidal radial coordinate: the largest solution of
//   sum_j x_j^2 / (a_j^2 + s) = 1.
// sigma_a(0) = -infinity by convention; the sentinel is explicit so the
// value is never fed into arithmetic.
struct SigmaA {
    double value = 0.0;
    bool minus_infinity = false;

    bool inside() const { return minus_infinity || value <= 0.0; }
};

inline SigmaA sigma_a(const Vec& x, const Ellipsoid& e) {
    const int n = e.dim;
    double r2 = 0.0, s_in = 0.0;
    for (int j = 0; j < n; ++j) {
        r2 += x[j] * x[j];
        s_in += x[j] * x[j] / (e.a[j] * e.a[j]);
    }
    if (r2 == 0.0) return SigmaA{0.0, true};

    auto g = [&](double s) {
        double v = -1.0;
        for (int j = 0; j < n; ++j) v += x[j] * x[j] / (e.a[j] * e.a[j] + s);
        return v;
    };
    auto dg = [&](double s) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = e.a[j] * e.a[j] + s;
            v -= x[j] * x[j] / (d * d);
        }
        return v;
    };

    if (s_in == 1.0) return SigmaA{0.0, false};
    if (s_in > 1.0) {
        // outside: root lies in (0, |x|^2]
        return SigmaA{bisect_newton(g, dg, 0.0, r2, 1e-15), false};
    }

    // inside: the principal branch starts at -min a_j^2 over axes that
    // actually contribute (x_j != 0), where g blows up to +infinity
    double left_pole = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        if (x[j] != 0.0) left_pole = std::min(left_pole, e.a[j] * e.a[j]);
    double lo = -left_pole;
    double step = left_pole;
    for (int k = 0; k < 80; ++k) {
        step *= 0.5;
        if (g(lo + step) > 0.0) {
            return SigmaA{bisect_newton(g, dg, lo + step, 0.0, 1e-15), false};
        }
    }
    // root numerically indistinguishable from the pole
    return SigmaA{lo, false};
}

} // namespace qn
