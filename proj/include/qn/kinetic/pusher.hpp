#pragma once

#include <cmath>

#include "qn/kinetic/grid.hpp"
#include "qn/kinetic/particles.hpp"

namespace qn {

// Total acceleration with the split field of the scaled system: the stiff
// confinement part -(1/eps) grad Phi_e is analytic, only the fluctuation
// gradient is gathered from the grid.
inline Vec particle_acceleration(const Equilibrium& eq, const FieldGrid& grid,
                                 double eps, const Vec& pos) {
    double p[3] = {pos[0], pos[1], pos[2]};
    Vec a = gather_gradient(grid, p);
    a *= -1.0 / std::sqrt(eps);
    const Vec gpe = eq.grad_phi_e(pos);
    for (int d = 0; d < eq.dim; ++d) a[d] -= gpe[d] / eps;
    return a;
}

// v += dt * a(x) for every particle (a half kick passes dt/2)
inline void kick(ParticleEnsemble& ens, const FieldGrid& grid, const Equilibrium& eq,
                 double dt) {
    const std::size_t np = ens.size();
    const double inv_eps = 1.0 / ens.eps;
    const double inv_sqeps = 1.0 / std::sqrt(ens.eps);
    const int dim = ens.dim;
    double pos[3] = {0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < np; ++p) {
        for (int d = 0; d < dim; ++d) pos[d] = ens.x[d][p];
        const Vec gp = gather_gradient(grid, pos);
        Vec xp = Vec::zero(dim);
        for (int d = 0; d < dim; ++d) xp[d] = pos[d];
        const Vec gpe = eq.grad_phi_e(xp);
        for (int d = 0; d < dim; ++d)
            ens.v[d][p] -= dt * (inv_eps * gpe[d] + inv_sqeps * gp[d]);
    }
}

inline void drift(ParticleEnsemble& ens, double dt) {
    for (int d = 0; d < ens.dim; ++d) {
        const std::size_t np = ens.size();
        double* __restrict xs = ens.x[d].data();
        const double* __restrict vs = ens.v[d].data();
        for (std::size_t p = 0; p < np; ++p) xs[p] += dt * vs[p];
    }
}

// Exact Ornstein-Uhlenbeck update for the linear Fokker-Planck operator
// L f = div_v(v f + theta grad_v f):
//   v <- v e^{-dt} + sqrt(theta (1 - e^{-2 dt})) xi.
// Leaves the Maxwellian M_{0,theta} invariant in law.
inline void fokker_planck_step(ParticleEnsemble& ens, double dt, std::uint64_t seed,
                               std::uint32_t step) {
    if (!(ens.theta > 0.0)) throw domain_error("fokker_planck_step requires theta > 0");
    if (dt == 0.0) return;
    const double decay = std::exp(-dt);
    const double noise = std::sqrt(ens.theta * (1.0 - decay * decay));
    const std::size_t np = ens.size();
    for (std::size_t p = 0; p < np; ++p) {
        RngStream rng(seed, p, step);
        for (int d = 0; d < ens.dim; ++d)
            ens.v[d][p] = ens.v[d][p] * decay + noise * rng.gaussian();
    }
}

} // namespace qn
