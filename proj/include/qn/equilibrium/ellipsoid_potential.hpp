#pragma once

#include <cmath>

#include "qn/core/ellipsoid.hpp"
#include "qn/core/gamma.hpp"
#include "qn/core/quadrature.hpp"
#include "qn/equilibrium/zmap.hpp"

namespace qn {

// Newtonian potential of the uniformly charged ellipsoid,
// Gamma * 1_{K_a}. The N=2 branch formulas differ from the exact
// convolution by an additive constant; it is fixed once per ellipsoid by
// matching the far field Gamma * 1 -> |K_a| Gamma at |x| = 1e3 max a_j.
class NewtonianEllipsoidPotential {
public:
    explicit NewtonianEllipsoidPotential(const Ellipsoid& e) : e_(e) {
        if (e.dim < 2) throw domain_error("ellipsoid potential: N must be 2 or 3");
        if (e_.dim == 2) {
            const double far = 1e3 * e_.max_axis();
            const Vec xf =
                (e_.dim == 2) ? Vec(far, 0.0) : Vec(far, 0.0, 0.0);
            offset2d_ = e_.volume() * gamma_fs(xf, 2) - raw_value(xf);
        }
    }

    const Ellipsoid& ellipsoid() const { return e_; }

    double value(const Vec& x) const { return raw_value(x) + offset2d_; }

    // Convenience: exact interior quadratic coefficients; inside K_a the
    // potential is value(0) - sum_j coeff_j x_j^2 with
    // coeff_j = (prod a) Z_j(a^2) / 4.
    AlphaVec interior_coefficients() const {
        AlphaVec a2{0.0, 0.0, 0.0};
        double prod = 1.0;
        for (int j = 0; j < e_.dim; ++j) {
            a2[j] = e_.a[j] * e_.a[j];
            prod *= e_.a[j];
        }
        AlphaVec z = Z_map(a2, e_.dim);
        for (int j = 0; j < e_.dim; ++j) z[j] *= 0.25 * prod;
        return z;
    }

private:
    Ellipsoid e_;
    double offset2d_ = 0.0;

    double raw_value(const Vec& x) const {
        const SigmaA s = sigma_a(x, e_);
        const double sig = s.minus_infinity ? 0.0 : std::max(s.value, 0.0);
        return (e_.dim == 2) ? value2d(x, sig) : value3d(x, sig);
    }

    // closed forms via int (a_j^2+s)^{-1} ((a_1^2+s)(a_2^2+s))^{-1/2} ds
    //               = 2 / ((a_j^2+sigma) + sqrt((a_1^2+sigma)(a_2^2+sigma)))
    double value2d(const Vec& x, double sig) const {
        const double A = e_.a[0] * e_.a[0], B = e_.a[1] * e_.a[1];
        const double root = std::sqrt((A + sig) * (B + sig));
        const double logterm = -std::log(sig + 0.5 * (A + B) + root);
        double jsum = 0.0;
        jsum += x[0] * x[0] * 2.0 / ((A + sig) + root);
        jsum += x[1] * x[1] * 2.0 / ((B + sig) + root);
        return 0.25 * e_.a[0] * e_.a[1] * (logterm - jsum);
    }

    double value3d(const Vec& x, double sig) const {
        const double A0 = e_.a[0] * e_.a[0], A1 = e_.a[1] * e_.a[1], A2 = e_.a[2] * e_.a[2];
        auto f = [&](double s) {
            const double t0 = A0 + s, t1 = A1 + s, t2 = A2 + s;
            const double q = 1.0 - x[0] * x[0] / t0 - x[1] * x[1] / t1 - x[2] * x[2] / t2;
            return q / std::sqrt(t0 * t1 * t2);
        };
        const double split = std::max(sig, std::max(A0, std::max(A1, A2)));
        const double head = integrate(f, sig, split, 1e-12);
        const double tail = integrate_half_line(f, split, 1e-12);
        const double prod = e_.a[0] * e_.a[1] * e_.a[2];
        return 0.25 * prod * (head + tail);
    }
};

inline double ellipsoid_newtonian_potential(const Vec& x, const Ellipsoid& e) {
    return NewtonianEllipsoidPotential(e).value(x);
}

} // namespace qn
