#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "qn/diagnostics/energy.hpp"

namespace qn {

// Histogram estimate of int f ln f over phase space. Bins of width
// range / ceil(n_p^{1/(2d)}) per axis, d = 2N phase-space dimensions; the
// estimate is biased and labelled approximate wherever it is reported.
inline double entropy_estimate(const ParticleEnsemble& ens) {
    const int dim = ens.dim;
    const int d_phase = 2 * dim;
    const std::size_t np = ens.size();
    if (np == 0) return 0.0;
    const int bins_per_axis =
        std::max(2, int(std::ceil(std::pow(double(np), 1.0 / (2.0 * d_phase)))));

    double lo[6], hi[6];
    for (int a = 0; a < d_phase; ++a) {
        const auto& arr = (a < dim) ? ens.x[a] : ens.v[a - dim];
        double mn = arr[0], mx = arr[0];
        for (double v : arr) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        lo[a] = mn;
        hi[a] = mx + 1e-300 + 1e-12 * (mx - mn + 1.0);
    }

    std::unordered_map<std::uint64_t, double> cells;
    cells.reserve(np / 4);
    double bin_vol = 1.0;
    for (int a = 0; a < d_phase; ++a) bin_vol *= (hi[a] - lo[a]) / bins_per_axis;
    for (std::size_t p = 0; p < np; ++p) {
        std::uint64_t key = 0;
        for (int a = 0; a < d_phase; ++a) {
            const double v = (a < dim) ? ens.x[a][p] : ens.v[a - dim][p];
            int b = int((v - lo[a]) / (hi[a] - lo[a]) * bins_per_axis);
            b = std::min(std::max(b, 0), bins_per_axis - 1);
            key = key * std::uint64_t(bins_per_axis) + std::uint64_t(b);
        }
        cells[key] += ens.w[p];
    }

    double acc = 0.0;
    for (const auto& [key, mass] : cells) {
        (void)key;
        if (mass > 0.0) acc += mass * std::log(mass / bin_vol);
    }
    return acc;
}

// Modulated free energy / entropy of the Fokker-Planck regime:
//   H_FP = H + theta int f ln f + (N m theta / 2) ln(2 pi theta)
//          - theta m ln(m / Z_eps),
// with Z_eps = int exp(-Phi_e / (eps theta)) dx (grid quadrature; Phi_e = 0
// on K so the integrand is 1 there and decays outside).
inline double partition_grid(const std::vector<double>& phie_nodes, const FieldGrid& grid,
                             double eps, double theta) {
    KahanSum acc;
    for (double pe : phie_nodes) acc.add(std::exp(-pe / (eps * theta)));
    return acc.value() * grid.cell_volume();
}

struct FpEntropyReport {
    double h_fp = 0.0;
    double entropy = 0.0; // histogram estimate of int f ln f (approximate)
    double z_eps = 0.0;
};

inline FpEntropyReport modulated_entropy_fp(const ParticleEnsemble& ens,
                                            const FieldGrid& grid, const Equilibrium& eq,
                                            const VelocityField& vfield, double t,
                                            const std::vector<double>& phie_nodes) {
    if (!(ens.theta > 0.0)) throw domain_error("modulated_entropy_fp requires theta > 0");
    const double theta = ens.theta;
    const double m = ens.charge();
    FpEntropyReport rep;
    rep.entropy = entropy_estimate(ens);
    rep.z_eps = partition_grid(phie_nodes, grid, ens.eps, theta);
    const ModulatedEnergy h = modulated_energy(ens, grid, eq, vfield, t);
    rep.h_fp = h.total() + theta * rep.entropy +
               0.5 * ens.dim * m * theta * std::log(2.0 * M_PI * theta) -
               theta * m * std::log(m / rep.z_eps);
    return rep;
}

} // namespace qn
