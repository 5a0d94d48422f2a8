#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "qn/core/rng.hpp"
#include "qn/equilibrium/equilibrium.hpp"
#include "qn/fluid/limit_field.hpp"
#include "qn/kinetic/grid.hpp"

namespace qn {

// Weighted macro-particles, structure-of-arrays layout.
struct ParticleEnsemble {
    int dim = 1;
    double eps = 1.0;
    double theta = 0.0; // 0: pure Vlasov-Poisson
    std::array<std::vector<double>, 3> x, v;
    std::vector<double> w;

    std::size_t size() const { return w.size(); }

    double charge() const {
        double acc = 0.0;
        for (double wi : w) acc += wi;
        return acc;
    }

    Vec position(std::size_t p) const {
        Vec r = Vec::zero(dim);
        for (int d = 0; d < dim; ++d) r[d] = x[d][p];
        return r;
    }
    Vec velocity(std::size_t p) const {
        Vec r = Vec::zero(dim);
        for (int d = 0; d < dim; ++d) r[d] = v[d][p];
        return r;
    }
};

// Cloud-in-cell charge assignment. Particles are split into a fixed number
// of chunks (independent of the worker count); each chunk accumulates into
// its own buffer and buffers are merged in chunk order, so the result is
// bitwise independent of n_workers.
inline void deposit_density(const ParticleEnsemble& ens, FieldGrid& grid,
                            int n_workers = 1) {
    constexpr int kChunks = 16;
    const std::size_t np = ens.size();
    const std::size_t chunk = (np + kChunks - 1) / kChunks;

    std::array<std::vector<double>, kChunks> buffers;
    auto run_chunk = [&](int c) {
        const std::size_t begin = c * chunk;
        const std::size_t end = std::min(np, begin + chunk);
        if (begin >= end) return;
        auto& buf = buffers[c];
        buf.assign(grid.size(), 0.0);
        const double inv_vol = 1.0 / grid.cell_volume();
        const int jmax = grid.dim > 1 ? 1 : 0, kmax = grid.dim > 2 ? 1 : 0;
        double pos[3];
        for (std::size_t p = begin; p < end; ++p) {
            for (int d = 0; d < grid.dim; ++d) pos[d] = ens.x[d][p];
            const CicStencil s = cic_stencil(grid, pos);
            const double q = ens.w[p] * inv_vol;
            for (int k = 0; k <= kmax; ++k)
                for (int j = 0; j <= jmax; ++j)
                    for (int i = 0; i <= 1; ++i) {
                        double wgt = (i ? s.f[0] : 1.0 - s.f[0]);
                        if (grid.dim > 1) wgt *= (j ? s.f[1] : 1.0 - s.f[1]);
                        if (grid.dim > 2) wgt *= (k ? s.f[2] : 1.0 - s.f[2]);
                        buf[grid.index(s.i0[0] + i, s.i0[1] + j, s.i0[2] + k)] += q * wgt;
                    }
        }
    };

    if (n_workers <= 1) {
        for (int c = 0; c < kChunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int nw = std::min(n_workers, kChunks);
        for (int t = 0; t < nw; ++t)
            pool.emplace_back([&]() {
                for (int c = next.fetch_add(1); c < kChunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    std::fill(grid.rho.begin(), grid.rho.end(), 0.0);
    for (int c = 0; c < kChunks; ++c) {
        if (buffers[c].empty()) continue;
        for (std::size_t i = 0; i < grid.size(); ++i) grid.rho[i] += buffers[c][i];
    }
}

// Smooth bump chi, compactly supported in |x - center| < radius, with an
// analytic Laplacian: chi = A (1-u^2)^4, u = |x-c|/r0.
struct BumpChi {
    Vec center;
    double radius = 1.0;
    double amplitude = 1.0;

    double value(const Vec& x) const {
        const double u = norm(x - center) / radius;
        if (u >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        return amplitude * q * q * q * q;
    }

    double laplacian(const Vec& x) const {
        const int n = x.dim;
        const double r = norm(x - center);
        const double u = r / radius;
        if (u >= 1.0) return 0.0;
        const double q = 1.0 - u * u;
        // g(u) = (1-u^2)^4: g' = -8u q^3, g'' = -8q^3 + 48 u^2 q^2
        const double gpp = -8.0 * q * q * q + 48.0 * u * u * q * q;
        if (r == 0.0) return amplitude * n * gpp / (radius * radius);
        const double gp = -8.0 * u * q * q * q;
        return amplitude * (gpp + (n - 1) * gp / u) / (radius * radius);
    }
};

enum class SamplingMode { rejection, stratified };

struct InitOptions {
    double sigma = 0.0;              // thermal spread sigma_eps
    double delta = 0.0;              // bump amplitude delta_eps
    BumpChi chi;                     // perturbation shape (used when delta != 0)
    std::size_t n_particles = 10000;
    std::uint64_t seed = 1;
    SamplingMode sampling = SamplingMode::rejection;
    double eps = 1.0;
    double theta = 0.0;
};

namespace init_detail {

// monotone cumulative table + inverse by linear interpolation
class CdfTable {
public:
    CdfTable(std::vector<double> xs, std::vector<double> pdf) : xs_(std::move(xs)) {
        cdf_.resize(xs_.size(), 0.0);
        for (std::size_t i = 1; i < xs_.size(); ++i)
            cdf_[i] = cdf_[i - 1] +
                      0.5 * (pdf[i] + pdf[i - 1]) * (xs_[i] - xs_[i - 1]);
        const double total = cdf_.back();
        if (!(total > 0.0)) throw precondition_error("init: sampling density vanishes");
        for (auto& c : cdf_) c /= total;
    }

    double invert(double u) const {
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.begin()) return xs_.front();
        if (it == cdf_.end()) return xs_.back();
        const std::size_t i = it - cdf_.begin();
        const double c0 = cdf_[i - 1], c1 = cdf_[i];
        const double f = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
        return xs_[i - 1] + f * (xs_[i] - xs_[i - 1]);
    }

private:
    std::vector<double> xs_, cdf_;
};

} // namespace init_detail

// Well-prepared initial data: positions from the density
// n_e - delta * (Laplacian chi), velocities V_init(x) + sigma * xi with xi
// standard Gaussian, equal weights m / n_particles. The empirical modulated
// energy of the output vanishes as sigma, delta/sqrt(eps) -> 0 and
// n_particles -> infinity.
inline ParticleEnsemble init_well_prepared(const Equilibrium& eq,
                                           const VelocityField& v_init,
                                           const InitOptions& opt) {
    const int dim = eq.dim;
    ParticleEnsemble ens;
    ens.dim = dim;
    ens.eps = opt.eps;
    ens.theta = opt.theta;
    const std::size_t np = opt.n_particles;
    for (int d = 0; d < dim; ++d) {
        ens.x[d].resize(np);
        ens.v[d].resize(np);
    }
    ens.w.assign(np, eq.mass / double(np));

    auto density = [&](const Vec& x) {
        double q = eq.n_e(x);
        if (opt.delta != 0.0) q -= opt.delta * opt.chi.laplacian(x);
        return q;
    };

    // precondition: q >= 0 on K (sampled) and chi supported inside K
    if (opt.delta != 0.0) {
        if (eq.potential.cls == PotentialClass::radial)
            throw precondition_error("init: delta perturbation unsupported for the "
                                     "radial class (n_e may be unbounded)");
        const double Rb = eq.support_radius();
        const double reach =
            std::max(Rb, norm(opt.chi.center) + opt.chi.radius) * 1.05;
        RngStream probe(opt.seed ^ 0x5eedu, 0, 0);
        for (int t = 0; t < 4096; ++t) {
            Vec x = Vec::zero(dim);
            for (int d = 0; d < dim; ++d) x[d] = (2.0 * probe.uniform() - 1.0) * reach;
            if (opt.chi.value(x) != 0.0 && !eq.in_support(x))
                throw precondition_error("init: chi must be supported inside K");
            if (eq.in_support(x) && density(x) < 0.0)
                throw precondition_error("init: n_e - delta Laplacian(chi) < 0");
        }
    }

    // ---- positions ----
    if (dim == 1) {
        const double a = eq.domain.kind == DomainKind::interval ? eq.domain.a_minus
                                                                : -eq.domain.R;
        const double b = eq.domain.kind == DomainKind::interval ? eq.domain.a_plus
                                                                : eq.domain.R;
        const int ng = 16384;
        std::vector<double> xs(ng + 1), pdf(ng + 1);
        for (int i = 0; i <= ng; ++i) {
            xs[i] = a + (b - a) * i / ng;
            pdf[i] = std::max(density(Vec(xs[i])), 0.0);
        }
        init_detail::CdfTable cdf(xs, pdf);
        if (opt.sampling == SamplingMode::stratified) {
            for (std::size_t p = 0; p < np; ++p)
                ens.x[0][p] = cdf.invert((p + 0.5) / double(np));
        } else {
            for (std::size_t p = 0; p < np; ++p) {
                RngStream rng(opt.seed, p, kRngTagPositions);
                ens.x[0][p] = cdf.invert(rng.uniform());
            }
        }
    } else if (eq.potential.cls == PotentialClass::radial) {
        // exact radial mass CDF: M(r) = N |B_1| r^{N-1} phi'(r), angles uniform
        const int ng = 16384;
        std::vector<double> rs(ng + 1), pdf(ng + 1);
        const double R = eq.domain.R;
        for (int i = 0; i <= ng; ++i) {
            rs[i] = R * i / double(ng);
            const double r = std::max(rs[i], 1e-14 * R);
            const double lap = eq.potential.laplacian(Vec(r, 0.0));
            pdf[i] = std::max(lap, 0.0) * std::pow(r, dim - 1);
        }
        init_detail::CdfTable cdf(rs, pdf);
        std::uint64_t halton_index = 0;
        for (std::size_t p = 0; p < np; ++p) {
            RngStream rng(opt.seed, p, kRngTagPositions);
            double u1, u2, u3 = 0.0;
            if (opt.sampling == SamplingMode::stratified) {
                u1 = (p + 0.5) / double(np);
                u2 = halton(halton_index, 2);
                u3 = halton(halton_index, 3);
                ++halton_index;
            } else {
                u1 = rng.uniform();
                u2 = rng.uniform();
                u3 = rng.uniform();
            }
            const double r = cdf.invert(u1);
            if (dim == 2) {
                const double ang = 2.0 * M_PI * u2;
                ens.x[0][p] = r * std::cos(ang);
                ens.x[1][p] = r * std::sin(ang);
            } else {
                const double c = 2.0 * u2 - 1.0;
                const double sq = std::sqrt(std::max(0.0, 1.0 - c * c));
                const double ang = 2.0 * M_PI * u3;
                ens.x[0][p] = r * sq * std::cos(ang);
                ens.x[1][p] = r * sq * std::sin(ang);
                ens.x[2][p] = r * c;
            }
        }
    } else {
        // rejection from the envelope max(n_e) over the bounding box of K
        double qmax = eq.n_e_bound();
        if (opt.delta != 0.0)
            qmax += std::abs(opt.delta) * 60.0 * opt.chi.amplitude /
                    (opt.chi.radius * opt.chi.radius); // bound on |Lap chi|
        std::array<double, 3> blo{}, bhi{};
        for (int d = 0; d < dim; ++d) {
            const double r = (eq.domain.kind == DomainKind::ellipsoid_domain)
                                 ? eq.domain.axes[d]
                                 : eq.domain.R;
            blo[d] = -r;
            bhi[d] = r;
        }
        double box_vol = 1.0;
        for (int d = 0; d < dim; ++d) box_vol *= (bhi[d] - blo[d]);

        std::uint64_t accepted_total = 0, tried_total = 0;
        std::uint64_t halton_index = 0;
        for (std::size_t p = 0; p < np; ++p) {
            RngStream rng(opt.seed, p, kRngTagPositions);
            bool placed = false;
            for (int attempt = 0; attempt < 65536; ++attempt) {
                Vec cand = Vec::zero(dim);
                double uacc;
                if (opt.sampling == SamplingMode::stratified) {
                    cand[0] = blo[0] + (bhi[0] - blo[0]) * halton(halton_index, 2);
                    if (dim > 1) cand[1] = blo[1] + (bhi[1] - blo[1]) * halton(halton_index, 3);
                    if (dim > 2) cand[2] = blo[2] + (bhi[2] - blo[2]) * halton(halton_index, 5);
                    uacc = halton(halton_index, 7);
                    ++halton_index;
                } else {
                    for (int d = 0; d < dim; ++d)
                        cand[d] = blo[d] + (bhi[d] - blo[d]) * rng.uniform();
                    uacc = rng.uniform();
                }
                ++tried_total;
                if (uacc * qmax <= density(cand)) {
                    for (int d = 0; d < dim; ++d) ens.x[d][p] = cand[d];
                    placed = true;
                    ++accepted_total;
                    break;
                }
            }
            if (!placed)
                throw config_error("init: rejection sampling failed to place a particle");
        }
        const double efficiency = double(accepted_total) / double(tried_total);
        (void)box_vol;
        if (efficiency < 0.01)
            throw config_error("init: rejection efficiency below 1% "
                               "(envelope too loose for this density)");
    }

    // ---- velocities ----
    for (std::size_t p = 0; p < np; ++p) {
        RngStream rng(opt.seed, p, kRngTagVelocities);
        const Vec xp = ens.position(p);
        const Vec vbase = v_init(0.0, xp);
        for (int d = 0; d < dim; ++d)
            ens.v[d][p] = vbase[d] + opt.sigma * rng.gaussian();
    }
    return ens;
}

} // namespace qn
