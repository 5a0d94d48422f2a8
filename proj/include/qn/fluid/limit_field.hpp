#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "qn/core/ellipsoid.hpp"
#include "qn/core/errors.hpp"
#include "qn/core/vec.hpp"

namespace qn {

using VelocityField = std::function<Vec(double, const Vec&)>;

// Analytic solution family of the incompressible Euler / friction-Euler
// system on a ball or ellipse: a rotation whose amplitude decays like
// exp(-gamma t). Carries closed-form pressure, streamfunction and material
// acceleration so the residual checker can run without finite differences.
class LimitField {
public:
    // V(t,x) = w(t) (-(a1/a2) x2, (a2/a1) x1), w(t) = w0 exp(-gamma t).
    // a1 = a2 = R gives the rigid rotation on B(0,R).
    static LimitField elliptic_rotation(const Ellipsoid& e, double omega0, double gamma) {
        if (e.dim != 2) throw domain_error("elliptic_rotation: N must be 2");
        LimitField f;
        f.dim_ = 2;
        f.gamma_ = gamma;
        f.omega0_ = omega0;
        f.axes_ = e;
        return f;
    }

    static LimitField rigid_rotation_ball(double omega0, double gamma, double R) {
        return elliptic_rotation(Ellipsoid(R, R), omega0, gamma);
    }

    // In 1D the only divergence-free no-flux field is V = 0.
    static LimitField zero_field(int dim) {
        LimitField f;
        f.dim_ = SpaceDim(dim);
        f.zero_ = true;
        return f;
    }

    int dim() const { return dim_; }
    double friction() const { return gamma_; }
    const Ellipsoid& domain() const { return axes_; }
    bool is_zero() const { return zero_; }
    // circumscribing radius of the domain
    double radius() const { return zero_ ? 0.0 : axes_.max_axis(); }

    double omega(double t) const { return zero_ ? 0.0 : omega0_ * std::exp(-gamma_ * t); }

    Vec velocity(double t, const Vec& x) const {
        if (zero_) return Vec::zero(dim_);
        const double w = omega(t);
        return Vec(-w * (axes_.a[0] / axes_.a[1]) * x[1],
                   w * (axes_.a[1] / axes_.a[0]) * x[0]);
    }

    double pressure(double t, const Vec& x) const {
        if (zero_) return 0.0;
        const double w = omega(t);
        return 0.5 * w * w * (x[0] * x[0] + x[1] * x[1]);
    }

    Vec pressure_gradient(double t, const Vec& x) const {
        if (zero_) return Vec::zero(dim_);
        const double w = omega(t);
        return Vec(w * w * x[0], w * w * x[1]);
    }

    // d_t V + (V . grad) V, in closed form
    Vec material_acceleration(double t, const Vec& x) const {
        if (zero_) return Vec::zero(dim_);
        const double w = omega(t);
        Vec a = velocity(t, x);
        a *= -gamma_;
        a[0] -= w * w * x[0];
        a[1] -= w * w * x[1];
        return a;
    }

    // streamfunction with V = perp-grad h; polynomial, valid on all of R^2
    double streamfunction(double t, const Vec& x) const {
        if (zero_) return 0.0;
        const double w = omega(t);
        return 0.5 * w * ((axes_.a[1] / axes_.a[0]) * x[0] * x[0] +
                          (axes_.a[0] / axes_.a[1]) * x[1] * x[1]);
    }

    Vec streamfunction_gradient(double t, const Vec& x) const {
        if (zero_) return Vec::zero(dim_);
        const double w = omega(t);
        return Vec(w * (axes_.a[1] / axes_.a[0]) * x[0],
                   w * (axes_.a[0] / axes_.a[1]) * x[1]);
    }

private:
    int dim_ = 2;
    bool zero_ = false;
    double gamma_ = 0.0;
    double omega0_ = 0.0;
    Ellipsoid axes_{1.0, 1.0};
};

// C^inf cutoff: 1 on r <= r1, 0 on r >= r2, exp-based partition of unity
// in between.
class SmoothCutoff {
public:
    SmoothCutoff(double r1, double r2) : r1_(r1), r2_(r2) {
        if (!(r2 > r1 && r1 > 0.0)) throw domain_error("SmoothCutoff: need 0 < r1 < r2");
    }

    double value(double r) const {
        if (r <= r1_) return 1.0;
        if (r >= r2_) return 0.0;
        const double t = (r - r1_) / (r2_ - r1_);
        const double a = bump(1.0 - t), b = bump(t);
        return a / (a + b);
    }

    double derivative(double r) const {
        if (r <= r1_ || r >= r2_) return 0.0;
        const double t = (r - r1_) / (r2_ - r1_);
        const double a = bump(1.0 - t), b = bump(t);
        const double da = -dbump(1.0 - t), db = dbump(t);
        return ((da * b - a * db) / ((a + b) * (a + b))) / (r2_ - r1_);
    }

private:
    double r1_, r2_;
    static double bump(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }
    static double dbump(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s) / (s * s); }
};

// Solenoidal extension of Appendix-B type: curl of (cutoff * streamfunction).
// Equals V on B(0, 3R/2), vanishes outside B(0, 2R), exactly divergence
// free everywhere.
class ExtendedField {
public:
    explicit ExtendedField(LimitField base, std::optional<double> cutoff_radius = {})
        : base_(std::move(base)),
          R_(cutoff_radius.value_or(base_.radius())),
          chi_(1.5 * R_, 2.0 * R_) {
        if (base_.dim() != 2 && !base_.is_zero())
            throw domain_error("extend_divfree: streamfunction construction is 2D");
    }

    double support_radius() const { return 2.0 * R_; }

    Vec velocity(double t, const Vec& x) const {
        if (base_.is_zero()) return Vec::zero(base_.dim());
        const double r = norm(x);
        if (r >= 2.0 * R_) return Vec::zero(2);
        const double c = chi_.value(r);
        if (c == 1.0) return base_.velocity(t, x); // bitwise V inside
        // perp-grad (chi h) = chi perp-grad h + h perp-grad chi
        Vec v = base_.velocity(t, x);
        v *= c;
        const double h = base_.streamfunction(t, x);
        const double dchi = chi_.derivative(r);
        if (r > 0.0 && dchi != 0.0) {
            v[0] += h * dchi * (-x[1] / r);
            v[1] += h * dchi * (x[0] / r);
        }
        return v;
    }

    VelocityField as_function() const {
        return [self = *this](double t, const Vec& x) { return self.velocity(t, x); };
    }

private:
    LimitField base_;
    double R_;
    SmoothCutoff chi_;
};

inline ExtendedField extend_divfree(const LimitField& field,
                                    std::optional<double> cutoff_radius = {}) {
    return ExtendedField(field, cutoff_radius);
}

struct ResidualReport {
    double max_residual = 0.0;
    int skipped = 0; // probes outside the domain
};

// max over probes of |d_t V + (V.grad)V + grad p + gamma V|, analytic when
// the field provides closed forms, otherwise centered differences with
// stencil width fd_h.
inline ResidualReport limit_residual(const LimitField& field, double gamma,
                                     const std::vector<std::pair<double, Vec>>& probes,
                                     bool use_analytic = true, double fd_h = 1e-5) {
    ResidualReport rep;
    for (const auto& [t, x] : probes) {
        if (!field.is_zero() && !field.domain().contains(x)) {
            ++rep.skipped;
            continue;
        }
        Vec r = Vec::zero(field.dim());
        if (use_analytic) {
            r = field.material_acceleration(t, x) + field.pressure_gradient(t, x) +
                gamma * field.velocity(t, x);
        } else {
            const int n = field.dim();
            // time derivative
            Vec vt = field.velocity(t + fd_h, x) - field.velocity(t - fd_h, x);
            vt *= 1.0 / (2.0 * fd_h);
            // convective term and pressure gradient by central differences
            const Vec v = field.velocity(t, x);
            Vec conv = Vec::zero(n), gp = Vec::zero(n);
            for (int j = 0; j < n; ++j) {
                Vec xp = x, xm = x;
                xp[j] += fd_h;
                xm[j] -= fd_h;
                const Vec dv = field.velocity(t, xp) - field.velocity(t, xm);
                for (int i = 0; i < n; ++i) conv[i] += v[j] * dv[i] / (2.0 * fd_h);
                gp[j] = (field.pressure(t, xp) - field.pressure(t, xm)) / (2.0 * fd_h);
            }
            r = vt + conv + gp + gamma * v;
        }
        rep.max_residual = std::max(rep.max_residual, norm(r));
    }
    return rep;
}

} // namespace qn
