#pragma once

#include <cmath>

#include "qn/core/reduce.hpp"
#include "qn/fluid/limit_field.hpp"
#include "qn/kinetic/grid.hpp"
#include "qn/kinetic/particles.hpp"

namespace qn {

// Conserved-sum pieces: (1/2) int |v|^2 f + (1/eps) int Phi_e f
// + (1/2) int |grad Psi|^2.
struct EnergyBudget {
    double kinetic = 0.0;
    double phi_e = 0.0;
    double fluct = 0.0;
    double conserved_sum() const { return kinetic + phi_e + fluct; }
};

// Modulated energy components: kinetic part is measured relative to the
// extended reference field.
struct ModulatedEnergy {
    double kinetic_rel = 0.0;
    double fluct = 0.0;
    double phi_e = 0.0;
    double total() const { return kinetic_rel + fluct + phi_e; }
};

inline double fluctuation_energy(const FieldGrid& grid) {
    KahanSum acc;
    for (int d = 0; d < grid.dim; ++d)
        for (double g : grid.gpsi[d]) acc.add(g * g);
    return 0.5 * acc.value() * grid.cell_volume();
}

inline EnergyBudget energy_budget(const ParticleEnsemble& ens, const FieldGrid& grid,
                                  const Equilibrium& eq) {
    EnergyBudget out;
    KahanSum kin, pe;
    const std::size_t np = ens.size();
    for (std::size_t p = 0; p < np; ++p) {
        double v2 = 0.0;
        for (int d = 0; d < ens.dim; ++d) v2 += ens.v[d][p] * ens.v[d][p];
        kin.add(0.5 * ens.w[p] * v2);
        pe.add(ens.w[p] * eq.phi_e(ens.position(p)));
    }
    out.kinetic = kin.value();
    out.phi_e = pe.value() / ens.eps;
    out.fluct = fluctuation_energy(grid);
    return out;
}

// H = (1/2) sum w |v - V(t,x)|^2 + (1/2)||grad Psi||^2 + (1/eps) sum w Phi_e(x)
inline ModulatedEnergy modulated_energy(const ParticleEnsemble& ens,
                                        const FieldGrid& grid, const Equilibrium& eq,
                                        const VelocityField& vfield, double t) {
    ModulatedEnergy out;
    KahanSum kin, pe;
    const std::size_t np = ens.size();
    for (std::size_t p = 0; p < np; ++p) {
        const Vec x = ens.position(p);
        const Vec vref = vfield(t, x);
        double dv2 = 0.0;
        for (int d = 0; d < ens.dim; ++d) {
            const double dvd = ens.v[d][p] - vref[d];
            dv2 += dvd * dvd;
        }
        kin.add(0.5 * ens.w[p] * dv2);
        pe.add(ens.w[p] * eq.phi_e(x));
    }
    out.kinetic_rel = kin.value();
    out.phi_e = pe.value() / ens.eps;
    out.fluct = fluctuation_energy(grid);
    return out;
}

// total particle momentum, sum w v
inline Vec total_momentum(const ParticleEnsemble& ens) {
    Vec out = Vec::zero(ens.dim);
    for (int d = 0; d < ens.dim; ++d) {
        KahanSum acc;
        const std::size_t np = ens.size();
        for (std::size_t p = 0; p < np; ++p) acc.add(ens.w[p] * ens.v[d][p]);
        out[d] = acc.value();
    }
    return out;
}

} // namespace qn
