#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "qn/diagnostics/energy.hpp"

namespace qn {

struct DensityDistance {
    double l1 = 0.0;
    double h_minus1 = 0.0;
};

// L1 distance on the grid and the H^{-1} surrogate. The identity
// n_e - rho = sqrt(eps) div(grad Psi) makes sqrt(eps) ||grad Psi||_{L2}
// the exact discrete analogue of the H^{-1} distance, so
// h_minus1^2 = 2 eps E_fluct by construction.
inline DensityDistance density_distance(const FieldGrid& grid, double eps) {
    DensityDistance out;
    KahanSum acc;
    for (std::size_t i = 0; i < grid.size(); ++i)
        acc.add(std::abs(grid.rho[i] - grid.ne[i]));
    out.l1 = acc.value() * grid.cell_volume();
    out.h_minus1 = std::sqrt(2.0 * eps * fluctuation_energy(grid));
    return out;
}

using TestField = std::function<Vec(const Vec&)>;

// Weak-star convergence proxy: int (J_eps - n_e V) . Theta dx, particle sum
// against grid quadrature, one value per test field.
inline std::vector<double> current_pairings(const ParticleEnsemble& ens,
                                            const FieldGrid& grid,
                                            const VelocityField& vfield, double t,
                                            const std::vector<TestField>& test_fields) {
    std::vector<double> out;
    out.reserve(test_fields.size());
    for (const auto& theta : test_fields) {
        KahanSum part;
        const std::size_t np = ens.size();
        for (std::size_t p = 0; p < np; ++p) {
            const Vec x = ens.position(p);
            const Vec th = theta(x);
            double dotv = 0.0;
            for (int d = 0; d < ens.dim; ++d) dotv += ens.v[d][p] * th[d];
            part.add(ens.w[p] * dotv);
        }
        KahanSum ref;
        for (int k = 0; k < grid.n[2]; ++k)
            for (int j = 0; j < grid.n[1]; ++j)
                for (int i = 0; i < grid.n[0]; ++i) {
                    const std::size_t idx = grid.index(i, j, k);
                    if (grid.ne[idx] == 0.0) continue;
                    const Vec x = grid.node(i, j, k);
                    ref.add(grid.ne[idx] * dot(vfield(t, x), theta(x)));
                }
        out.push_back(part.value() - ref.value() * grid.cell_volume());
    }
    return out;
}

struct GronwallReport {
    bool pass = false;
    double max_margin = 0.0; // max over rows of H(t) - e^{Ct}(H0 + tol)
    double fitted_c = 0.0;   // smallest rate that would pass
    double tol = 0.0;
};

// Checks H(t) <= e^{Ct} (H(0) + tol) with the Monte-Carlo floor
// tol = max(3 H(0) / sqrt(n_p), 1e-6).
inline GronwallReport gronwall_check(const std::vector<double>& ts,
                                     const std::vector<double>& hs, double rate,
                                     std::size_t n_particles) {
    if (ts.size() != hs.size() || ts.empty())
        throw config_error("gronwall_check: malformed series");
    GronwallReport rep;
    const double h0 = hs.front();
    rep.tol = std::max(3.0 * h0 / std::sqrt(double(std::max<std::size_t>(n_particles, 1))),
                       1e-6);
    rep.pass = true;
    rep.max_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double bound = std::exp(rate * ts[i]) * (h0 + rep.tol);
        rep.max_margin = std::max(rep.max_margin, hs[i] - bound);
        if (hs[i] > bound) rep.pass = false;
        if (ts[i] > 0.0 && hs[i] > h0 + rep.tol)
            rep.fitted_c = std::max(rep.fitted_c,
                                    std::log(hs[i] / (h0 + rep.tol)) / ts[i]);
    }
    return rep;
}

} // namespace qn
