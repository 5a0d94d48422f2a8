#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "qn/core/errors.hpp"
#include "qn/core/quadrature.hpp"
#include "qn/core/vec.hpp"

namespace qn {

// The ellipsoid integrals
//   Z_j(alpha) = int_0^inf (alpha_j + s)^{-1} prod_k (alpha_k + s)^{-1/2} ds
// and their potential zeta with grad(zeta) = Z. Z is a diffeomorphism of
// (0,inf)^N; its inverse determines the equilibrium ellipsoid's semi-axes.
// N=1,2 have closed forms, N=3 is evaluated by adaptive quadrature split
// at s = max_j alpha_j.

using AlphaVec = std::array<double, 3>;

namespace zdetail {

inline void require_positive(const AlphaVec& a, int dim) {
    for (int j = 0; j < dim; ++j)
        if (!(a[j] > 0.0)) throw domain_error("Z-map: components must be > 0");
}

template <typename F>
double split_integral(const F& f, double split, double rel_tol) {
    return integrate(f, 0.0, split, rel_tol) + integrate_half_line(f, split, rel_tol);
}

inline double max_component(const AlphaVec& a, int dim) {
    double m = a[0];
    for (int j = 1; j < dim; ++j) m = std::max(m, a[j]);
    return m;
}

} // namespace zdetail

// Strictly concave potential of the Z map, normalized so grad(zeta) = Z
// exactly (for N=3 this means -2 int_0^inf prod (alpha_k+s)^{-1/2} ds).
inline double zeta(const AlphaVec& alpha, int dim) {
    zdetail::require_positive(alpha, dim);
    if (dim == 2) return 4.0 * std::log(std::sqrt(alpha[0]) + std::sqrt(alpha[1]));
    if (dim != 3) throw domain_error("zeta: defined for N = 2 or 3");
    auto f = [&](double s) {
        return -2.0 / std::sqrt((alpha[0] + s) * (alpha[1] + s) * (alpha[2] + s));
    };
    return zdetail::split_integral(f, zdetail::max_component(alpha, 3), 1e-13);
}

inline AlphaVec Z_map(const AlphaVec& alpha, int dim) {
    zdetail::require_positive(alpha, dim);
    AlphaVec z{0.0, 0.0, 0.0};
    if (dim == 1) {
        z[0] = 2.0 / std::sqrt(alpha[0]);
        return z;
    }
    if (dim == 2) {
        const double g = std::sqrt(alpha[0] * alpha[1]);
        z[0] = 2.0 / (alpha[0] + g);
        z[1] = 2.0 / (alpha[1] + g);
        return z;
    }
    const double split = zdetail::max_component(alpha, 3);
    for (int j = 0; j < 3; ++j) {
        auto f = [&](double s) {
            const double p = (alpha[0] + s) * (alpha[1] + s) * (alpha[2] + s);
            return 1.0 / ((alpha[j] + s) * std::sqrt(p));
        };
        z[j] = zdetail::split_integral(f, split, 1e-13);
    }
    return z;
}

// Hessian of zeta (= Jacobian of Z), N=3. Entries are
//   d Z_j / d alpha_k = -(1/2) I_jk   (j != k),   -(3/2) I_jj   (j = k),
// with I_jk = int (alpha_j+s)^{-1} (alpha_k+s)^{-1} prod^{-1/2} ds.
inline std::array<std::array<double, 3>, 3> zeta_hessian3(const AlphaVec& alpha) {
    const double split = zdetail::max_component(alpha, 3);
    std::array<std::array<double, 3>, 3> h{};
    for (int j = 0; j < 3; ++j) {
        for (int k = j; k < 3; ++k) {
            auto f = [&](double s) {
                const double p = (alpha[0] + s) * (alpha[1] + s) * (alpha[2] + s);
                return 1.0 / ((alpha[j] + s) * (alpha[k] + s) * std::sqrt(p));
            };
            const double ijk = zdetail::split_integral(f, split, 1e-11);
            const double v = (j == k) ? -1.5 * ijk : -0.5 * ijk;
            h[j][k] = v;
            h[k][j] = v;
        }
    }
    return h;
}

namespace zdetail {

// Solve the 3x3 system H x = b by Gaussian elimination with partial pivoting.
inline std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m,
                                    std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        std::swap(b[col], b[piv]);
        if (m[col][col] == 0.0) throw convergence_error("singular Newton system", {}, 0.0);
        for (int r = col + 1; r < 3; ++r) {
            const double fac = m[r][col] / m[col][col];
            for (int c = col; c < 3; ++c) m[r][c] -= fac * m[col][c];
            b[r] -= fac * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= m[r][c] * x[c];
        x[r] = s / m[r][r];
    }
    return x;
}

} // namespace zdetail

// Inverse of the Z map. Closed form for N=1,2; for N=3 a damped Newton
// iteration on the gradient of the Legendre objective alpha -> z.alpha -
// zeta(alpha), which is strictly convex with minimizer Z^{-1}(z).
inline AlphaVec Z_inverse(const AlphaVec& z, int dim, double tol = 1e-10,
                          int max_iter = 100) {
    zdetail::require_positive(z, dim);
    AlphaVec alpha{0.0, 0.0, 0.0};
    if (dim == 1) {
        alpha[0] = 4.0 / (z[0] * z[0]);
        return alpha;
    }
    if (dim == 2) {
        const double s = z[0] + z[1];
        alpha[0] = 2.0 * z[1] / (z[0] * s);
        alpha[1] = 2.0 * z[0] / (z[1] * s);
        return alpha;
    }
    if (dim != 3) throw domain_error("Z_inverse: dim must be 1, 2 or 3");

    for (int j = 0; j < 3; ++j) alpha[j] = 2.0 / (3.0 * z[j]);
    auto objective = [&](const AlphaVec& a) {
        return z[0] * a[0] + z[1] * a[1] + z[2] * a[2] - zeta(a, 3);
    };

    auto residual_of = [&](const AlphaVec& a) {
        const AlphaVec za = Z_map(a, 3);
        double res = 0.0;
        for (int j = 0; j < 3; ++j) res = std::max(res, std::abs(z[j] - za[j]));
        return res;
    };
    auto newton_step = [&](const AlphaVec& a) {
        const AlphaVec za = Z_map(a, 3);
        auto h = zeta_hessian3(a);
        std::array<std::array<double, 3>, 3> hpos{};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) hpos[j][k] = -h[j][k];
        // minimize g = z.alpha - zeta: delta = -(Hess g)^{-1} grad g
        //                                   = (-Hess zeta)^{-1} (Z(alpha) - z)
        std::array<double, 3> rhs{za[0] - z[0], za[1] - z[1], za[2] - z[2]};
        return zdetail::solve3(hpos, rhs);
    };

    double obj = objective(alpha);
    double res = residual_of(alpha);
    bool converged = false;
    for (int it = 0; it < max_iter && !converged; ++it) {
        if (res < tol) {
            converged = true;
            break;
        }
        const auto delta = newton_step(alpha);
        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            AlphaVec trial{alpha[0] + t * delta[0], alpha[1] + t * delta[1],
                           alpha[2] + t * delta[2]};
            if (trial[0] > 0.0 && trial[1] > 0.0 && trial[2] > 0.0) {
                const double trial_obj = objective(trial);
                const double trial_res = residual_of(trial);
                // accept on objective decrease or, near the floor where the
                // objective is rounding-flat, on residual decrease
                if (trial_obj <= obj + 1e-14 * (1.0 + std::abs(obj)) ||
                    trial_res < res) {
                    alpha = trial;
                    obj = trial_obj;
                    res = trial_res;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted)
            throw convergence_error("Z_inverse: damped Newton stalled",
                                    {alpha[0], alpha[1], alpha[2]}, res);
    }
    if (!converged)
        throw convergence_error("Z_inverse: no convergence after max iterations",
                                {alpha[0], alpha[1], alpha[2]}, res);

    // quadratic polish: a few undamped steps push the residual down to the
    // quadrature floor (the inverse Jacobian amplifies z-error into alpha at
    // large alpha, so the stopping tolerance alone is not enough)
    for (int it = 0; it < 4; ++it) {
        const auto delta = newton_step(alpha);
        AlphaVec trial{alpha[0] + delta[0], alpha[1] + delta[1], alpha[2] + delta[2]};
        if (!(trial[0] > 0.0 && trial[1] > 0.0 && trial[2] > 0.0)) break;
        const double trial_res = residual_of(trial);
        if (trial_res >= res) break;
        alpha = trial;
        res = trial_res;
    }
    return alpha;
}

} // namespace qn
