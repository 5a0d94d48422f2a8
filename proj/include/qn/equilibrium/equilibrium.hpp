#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "qn/core/ellipsoid.hpp"
#include "qn/core/gamma.hpp"
#include "qn/core/quadrature.hpp"
#include "qn/core/rootfind.hpp"
#include "qn/equilibrium/ellipsoid_potential.hpp"
#include "qn/equilibrium/potential.hpp"
#include "qn/equilibrium/zmap.hpp"

namespace qn {

enum class DomainKind { ball, ellipsoid_domain, interval, radial_support };

struct Domain {
    DomainKind kind = DomainKind::ball;
    double R = 0.0;                      // ball / radial_support
    double R_min = 0.0;                  // radial_support
    std::array<double, 3> axes{};        // ellipsoid_domain
    double a_minus = 0.0, a_plus = 0.0;  // interval
};

// Quasi-neutral equilibrium: density n_e, coincidence set K = {Phi_e = 0},
// confinement potential Phi_e >= 0 and the modified Robin constant C*.
// Immutable after construction; all evaluators are pure.
class Equilibrium {
public:
    Potential potential;
    Domain domain;
    int dim = 1;
    double mass = 0.0;
    double robin_constant = 0.0;

    bool in_support(const Vec& x) const {
        switch (domain.kind) {
            case DomainKind::ball:
            case DomainKind::radial_support: return norm(x) <= domain.R;
            case DomainKind::ellipsoid_domain: return ellipsoid().contains(x);
            case DomainKind::interval: return x[0] >= domain.a_minus && x[0] <= domain.a_plus;
        }
        return false;
    }

    // radius of the smallest origin-centred ball containing K
    double support_radius() const {
        switch (domain.kind) {
            case DomainKind::ball:
            case DomainKind::radial_support: return domain.R;
            case DomainKind::ellipsoid_domain: {
                double m = 0.0;
                for (int j = 0; j < dim; ++j) m = std::max(m, domain.axes[j]);
                return m;
            }
            case DomainKind::interval:
                return std::max(std::abs(domain.a_minus), std::abs(domain.a_plus));
        }
        return 0.0;
    }

    Ellipsoid ellipsoid() const {
        if (domain.kind != DomainKind::ellipsoid_domain)
            throw domain_error("equilibrium domain is not an ellipsoid");
        if (dim == 2) return Ellipsoid(domain.axes[0], domain.axes[1]);
        return Ellipsoid(domain.axes[0], domain.axes[1], domain.axes[2]);
    }

    double n_e(const Vec& x) const {
        if (!in_support(x)) return 0.0;
        switch (potential.cls) {
            case PotentialClass::isotropic: return 1.0;
            case PotentialClass::quadratic: return potential.inv_lambda2_sum();
            default: return std::max(potential.laplacian(x), 0.0);
        }
    }

    double phi_e(const Vec& x) const {
        if (in_support(x)) return 0.0; // exact zero on K, no cancellation
        switch (domain.kind) {
            case DomainKind::ball:
            case DomainKind::radial_support: {
                const double r = norm(x);
                const auto& p = potential.profile;
                return p.f(r) - p.f(domain.R) +
                       mass * (gamma_radial(r, dim) - gamma_radial(domain.R, dim));
            }
            case DomainKind::interval: {
                const double x0 = x[0];
                const auto& p = potential.profile;
                if (x0 > domain.a_plus)
                    return p.f(x0) - p.f(domain.a_plus) - 0.5 * mass * (x0 - domain.a_plus);
                return p.f(x0) - p.f(domain.a_minus) + 0.5 * mass * (x0 - domain.a_minus);
            }
            case DomainKind::ellipsoid_domain:
                return quadratic_phi_e(x).first;
        }
        return 0.0;
    }

    Vec grad_phi_e(const Vec& x) const {
        if (in_support(x)) return Vec::zero(dim);
        switch (domain.kind) {
            case DomainKind::ball:
            case DomainKind::radial_support: {
                const double r = norm(x);
                const double d = potential.profile.df(r) -
                                 mass / (dim * unit_ball_volume(dim) * std::pow(r, dim - 1));
                Vec g = Vec::zero(dim);
                for (int j = 0; j < dim; ++j) g[j] = d * x[j] / r;
                return g;
            }
            case DomainKind::interval: {
                Vec g = Vec::zero(1);
                g[0] = potential.profile.df(x[0]) + (x[0] > domain.a_plus ? -0.5 : 0.5) * mass;
                return g;
            }
            case DomainKind::ellipsoid_domain:
                return quadratic_phi_e(x).second;
        }
        return Vec::zero(dim);
    }

    // quadrature of n_e over K, for the mass postcondition tests
    double mass_quadrature() const {
        switch (domain.kind) {
            case DomainKind::ball: return unit_ball_volume(dim) * std::pow(domain.R, dim);
            case DomainKind::ellipsoid_domain: {
                double prod = 1.0;
                for (int j = 0; j < dim; ++j) prod *= domain.axes[j];
                return unit_ball_volume(dim) * prod * potential.inv_lambda2_sum();
            }
            case DomainKind::radial_support: {
                const auto& p = potential.profile;
                const int n = dim;
                auto f = [&](double r) {
                    const double lap = p.ddf(r) + (n - 1) * p.df(r) / r;
                    return lap * std::pow(r, n - 1);
                };
                return n * unit_ball_volume(n) *
                       integrate(f, 1e-14 * domain.R, domain.R, 1e-11);
            }
            case DomainKind::interval: {
                const auto& p = potential.profile;
                return integrate([&](double x) { return p.ddf(x); }, domain.a_minus,
                                 domain.a_plus, 1e-11);
            }
        }
        return 0.0;
    }

    // upper bound for n_e on K where n_e is bounded (rejection envelope)
    double n_e_bound() const {
        switch (potential.cls) {
            case PotentialClass::isotropic: return 1.0;
            case PotentialClass::quadratic: return potential.inv_lambda2_sum();
            case PotentialClass::convex1d: {
                double m = 0.0;
                for (int i = 0; i <= 512; ++i) {
                    const double x = domain.a_minus +
                                     (domain.a_plus - domain.a_minus) * i / 512.0;
                    m = std::max(m, potential.profile.ddf(x));
                }
                return m;
            }
            case PotentialClass::radial:
                throw domain_error("n_e of the radial class may be unbounded; "
                                   "use the radial mass density instead");
        }
        return 0.0;
    }

    // ----- quadratic class (exterior integral form) -----

    // value and gradient of Phi_e outside K_a for the quadratic class
    std::pair<double, Vec> quadratic_phi_e(const Vec& x) const {
        const Ellipsoid e = ellipsoid();
        const SigmaA s = sigma_a(x, e);
        Vec g = Vec::zero(dim);
        if (s.inside()) return {0.0, g};
        const double sig = s.value;
        const double S = potential.inv_lambda2_sum();
        double prod = 1.0;
        for (int j = 0; j < dim; ++j) prod *= e.a[j];
        const double pref = 0.25 * prod * S;

        if (dim == 2) {
            const double A = e.a[0] * e.a[0], B = e.a[1] * e.a[1];
            auto J = [&](double a2, double s0) {
                return 2.0 / ((a2 + s0) + std::sqrt((A + s0) * (B + s0)));
            };
            auto W = [&](double s0) {
                return 2.0 * std::log(std::sqrt(A + s0) + std::sqrt(B + s0));
            };
            const double j0 = J(A, 0.0) - J(A, sig);
            const double j1 = J(B, 0.0) - J(B, sig);
            const double val =
                pref * (x[0] * x[0] * j0 + x[1] * x[1] * j1 - (W(sig) - W(0.0)));
            g[0] = 2.0 * pref * x[0] * j0;
            g[1] = 2.0 * pref * x[1] * j1;
            return {val, g};
        }

        const double A0 = e.a[0] * e.a[0], A1 = e.a[1] * e.a[1], A2 = e.a[2] * e.a[2];
        auto integrand = [&](double s0) {
            const double t0 = A0 + s0, t1 = A1 + s0, t2 = A2 + s0;
            const double q = x[0] * x[0] / t0 + x[1] * x[1] / t1 + x[2] * x[2] / t2 - 1.0;
            return q / std::sqrt(t0 * t1 * t2);
        };
        const double val = pref * integrate(integrand, 0.0, sig, 1e-12);
        for (int j = 0; j < dim; ++j) {
            const double aj2 = e.a[j] * e.a[j];
            auto fj = [&](double s0) {
                const double p = (A0 + s0) * (A1 + s0) * (A2 + s0);
                return 1.0 / ((aj2 + s0) * std::sqrt(p));
            };
            g[j] = 2.0 * pref * x[j] * integrate(fj, 0.0, sig, 1e-12);
        }
        return {val, g};
    }
};

// ----- solvers -----

// Isotropic potential |x|^2/(2N): n_e = 1_{B(0,R)} with |B(0,R)| = m.
inline Equilibrium solve_isotropic(double mass, int dim) {
    SpaceDim sd(dim);
    if (!(mass > 0.0)) throw domain_error("solve_isotropic: mass must be > 0");
    Equilibrium eq;
    eq.potential = Potential::isotropic(dim);
    eq.dim = dim;
    eq.mass = mass;
    eq.domain.kind = DomainKind::ball;
    eq.domain.R = std::pow(mass / unit_ball_volume(dim), 1.0 / dim);
    eq.robin_constant =
        eq.potential.profile.f(eq.domain.R) + mass * gamma_radial(eq.domain.R, dim);
    return eq;
}

// Quadratic anisotropic potential: support is the ellipsoid K_a with
// semi-axes fixed by (m / (2|B_1|)) Z(a^2) = (lambda_j^{-2})_j; the mass
// identity |B_1| (prod a_j) sum lambda_k^{-2} = m is verified afterwards.
inline Equilibrium solve_quadratic(const std::array<double, 3>& lambda, double mass,
                                   int dim) {
    if (dim < 2) throw domain_error("solve_quadratic: N must be 2 or 3");
    if (!(mass > 0.0)) throw domain_error("solve_quadratic: mass must be > 0");
    Equilibrium eq;
    eq.potential = Potential::quadratic(lambda, dim);
    eq.dim = dim;
    eq.mass = mass;
    eq.domain.kind = DomainKind::ellipsoid_domain;

    const double vb = unit_ball_volume(dim);
    AlphaVec z{0.0, 0.0, 0.0};
    for (int j = 0; j < dim; ++j) z[j] = (2.0 * vb / mass) / (lambda[j] * lambda[j]);
    const AlphaVec alpha = Z_inverse(z, dim);
    double prod = 1.0;
    for (int j = 0; j < dim; ++j) {
        eq.domain.axes[j] = std::sqrt(alpha[j]);
        prod *= eq.domain.axes[j];
    }

    const double S = eq.potential.inv_lambda2_sum();
    const double mass_check = vb * prod * S;
    if (std::abs(mass_check - mass) > 1e-8 * mass)
        throw internal_inconsistency_error(
            "solve_quadratic: mass identity |B_1| (prod a) sum(1/lambda^2) = m "
            "violated beyond 1e-8");

    eq.robin_constant =
        S * NewtonianEllipsoidPotential(eq.ellipsoid()).value(Vec::zero(dim));
    return eq;
}

// Radial potential phi(|x|): R solves
// N |B_1| R^{N-1} phi'(R) = m and n_e = (Laplacian of Phi_ext) 1_{B(0,R)}.
inline Equilibrium solve_radial(Potential pot, double mass) {
    if (pot.cls != PotentialClass::radial)
        throw domain_error("solve_radial: potential class must be radial");
    if (!(mass > 0.0)) throw domain_error("solve_radial: mass must be > 0");
    const int dim = pot.dim;
    const auto& p = pot.profile;
    const double nb = dim * unit_ball_volume(dim);

    auto F = [&](double R) { return nb * std::pow(R, dim - 1) * p.df(R) - mass; };
    auto dF = [&](double R) {
        return nb * ((dim - 1) * std::pow(R, dim - 2) * p.df(R) +
                     std::pow(R, dim - 1) * p.ddf(R));
    };
    double lo = 1e-12, hi = 1.0;
    if (F(hi) < 0.0) {
        if (!expand_bracket_up(F, lo, hi))
            throw precondition_error(
                "solve_radial: N |B_1| R^{N-1} phi'(R) never reaches the mass "
                "(phi' grows too slowly)");
    }
    const double R = bisect_newton(F, dF, lo, hi, 1e-15);

    double Rmin = 0.0;
    if (p.df(1e-12 * R) <= 0.0) {
        auto sgn = [&](double r) { return p.df(r) > 0.0 ? 1.0 : -1.0; };
        Rmin = bisect(sgn, 1e-12 * R, R, 1e-14);
    }

    Equilibrium eq;
    eq.potential = std::move(pot);
    eq.dim = dim;
    eq.mass = mass;
    eq.domain.kind = DomainKind::radial_support;
    eq.domain.R = R;
    eq.domain.R_min = Rmin;
    eq.robin_constant = eq.potential.profile.f(R) + mass * gamma_radial(R, dim);

    const double mq = eq.mass_quadrature();
    if (std::abs(mq - mass) > 1e-8 * mass)
        throw internal_inconsistency_error("solve_radial: mass quadrature check failed");
    return eq;
}

// 1D convex potential: a_+- solve Phi'(a_+-) = +-m/2,
// n_e = Phi'' on (a_-, a_+), and
// C* = (Phi(a_+)+Phi(a_-))/2 - (m/4)(a_+ - a_-).
inline Equilibrium solve_convex_1d(Potential pot, double mass) {
    if (pot.cls != PotentialClass::convex1d)
        throw domain_error("solve_convex_1d: potential class must be convex1d");
    if (!(mass > 0.0)) throw domain_error("solve_convex_1d: mass must be > 0");
    const auto& p = pot.profile;

    double reach = 1.0;
    while (p.df(reach) <= 0.5 * mass || p.df(-reach) >= -0.5 * mass) {
        reach *= 2.0;
        if (reach > 1e12)
            throw precondition_error(
                "solve_convex_1d: Phi' does not reach +-m/2 (coercivity h2 fails)");
    }
    auto fp = [&](double x) { return p.df(x) - 0.5 * mass; };
    auto fm = [&](double x) { return p.df(x) + 0.5 * mass; };
    const double a_plus = bisect_newton(fp, p.ddf, -reach, reach, 1e-15);
    const double a_minus = bisect_newton(fm, p.ddf, -reach, reach, 1e-15);

    // H2-style check: n_e = Phi'' must stay bounded away from zero inside
    // (measure-valued / disconnected-support regimes are rejected)
    double lo_dd = std::numeric_limits<double>::infinity(), hi_dd = 0.0;
    for (int i = 1; i < 512; ++i) {
        const double x = a_minus + (a_plus - a_minus) * i / 512.0;
        const double dd = p.ddf(x);
        lo_dd = std::min(lo_dd, dd);
        hi_dd = std::max(hi_dd, dd);
    }
    if (!(lo_dd > 1e-10 * std::max(hi_dd, 1.0)))
        throw unsupported_equilibrium_error(
            "solve_convex_1d: Phi'' is not bounded below on (a_-, a_+); "
            "equilibrium is outside the constructive class");

    const double robin =
        0.5 * (p.f(a_plus) + p.f(a_minus)) - 0.25 * mass * (a_plus - a_minus);
    Equilibrium eq;
    eq.potential = std::move(pot);
    eq.dim = 1;
    eq.mass = mass;
    eq.domain.kind = DomainKind::interval;
    eq.domain.a_minus = a_minus;
    eq.domain.a_plus = a_plus;
    eq.robin_constant = robin;

    const double mq = eq.mass_quadrature();
    if (std::abs(mq - mass) > 1e-8 * mass)
        throw internal_inconsistency_error("solve_convex_1d: mass quadrature check failed");
    return eq;
}

// sup over samples (strictly outside K) of |V . grad Phi_e| / Phi_e;
// finite for fields tangent to the boundary (Lemmas on Phi_e control).
template <typename VField>
double boundary_flux_bound(const Equilibrium& eq, VField&& field,
                           const std::vector<Vec>& samples) {
    double sup = 0.0;
    for (const Vec& x : samples) {
        if (eq.in_support(x)) continue; // ratio undefined: 0/0
        const double pe = eq.phi_e(x);
        if (!(pe > 0.0)) continue;
        sup = std::max(sup, std::abs(dot(field(x), eq.grad_phi_e(x))) / pe);
    }
    return sup;
}

} // namespace qn
