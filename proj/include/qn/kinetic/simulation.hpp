#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qn/diagnostics/distance.hpp"
#include "qn/diagnostics/energy.hpp"
#include "qn/diagnostics/entropy.hpp"
#include "qn/diagnostics/series.hpp"
#include "qn/kinetic/particles.hpp"
#include "qn/kinetic/poisson.hpp"
#include "qn/kinetic/pusher.hpp"

namespace qn {

enum class SimMode { vlasov_poisson, vlasov_poisson_fokker_planck };

struct SimConfig {
    SimMode mode = SimMode::vlasov_poisson;
    double eps = 1e-2;
    double theta = 0.0; // used in FP mode
    double t_final = 1.0;
    double dt_factor = 0.05; // dt cap = dt_factor * sqrt(eps)
    double cfl = 0.25;       // dt cap = cfl * h / max|v|
    std::size_t n_particles = 10000;
    std::uint64_t seed = 1;
    int cells = 256;        // nodes per axis
    double box_margin = 1.0; // margin = box_margin * diam(K) beyond K
    int diag_every = 10;    // steps between diagnostic rows
    int snapshot_every = 0; // 0 disables snapshots
    double sigma = 0.0;     // init: thermal spread
    double delta = 0.0;     // init: bump amplitude
    SamplingMode sampling = SamplingMode::rejection;
    int workers = 1;
};

// Per-step snapshot hook: (step index, time, ensemble, grid).
using SnapshotHook =
    std::function<void(int, double, const ParticleEnsemble&, const FieldGrid&)>;

// Orchestrates deposit -> field solve -> push (-> OU step) with the
// operator splitting fixed as half-kick, drift, field solve, half-kick,
// then the OU step when theta > 0. Deterministic given the seed; the
// worker count never changes results.
class Simulation {
public:
    Simulation(Equilibrium eq, SimConfig cfg)
        : eq_(std::move(eq)), cfg_(cfg) {
        if (cfg_.mode == SimMode::vlasov_poisson) cfg_.theta = 0.0;
        if (cfg_.mode == SimMode::vlasov_poisson_fokker_planck && !(cfg_.theta > 0.0))
            throw config_error("FP mode requires theta > 0");
        build_grid();
    }

    const Equilibrium& equilibrium() const { return eq_; }
    const FieldGrid& grid() const { return grid_; }
    const ParticleEnsemble& ensemble() const { return ens_; }
    const SimConfig& config() const { return cfg_; }

    // Initialize with well-prepared data around the reference field.
    void init(const VelocityField& v_init) {
        InitOptions opt;
        opt.sigma = cfg_.sigma;
        opt.delta = cfg_.delta;
        opt.n_particles = cfg_.n_particles;
        opt.seed = cfg_.seed;
        opt.sampling = cfg_.sampling;
        opt.eps = cfg_.eps;
        opt.theta = cfg_.theta;
        opt.chi.center = Vec::zero(eq_.dim);
        if (eq_.domain.kind == DomainKind::interval)
            opt.chi.center[0] = 0.5 * (eq_.domain.a_minus + eq_.domain.a_plus);
        opt.chi.radius = 0.5 * inradius();
        opt.chi.amplitude = 0.25;
        ens_ = init_well_prepared(eq_, v_init, opt);
    }

    void set_ensemble(ParticleEnsemble ens) { ens_ = std::move(ens); }

    // Reference field for the modulated energy (the solenoidal extension);
    // defaults to zero.
    void set_reference_field(VelocityField v) { vfield_ = std::move(v); }
    void set_test_fields(std::vector<TestField> fields) { test_fields_ = std::move(fields); }
    void set_snapshot_hook(SnapshotHook hook) { snapshot_ = std::move(hook); }

    DiagnosticSeries run() {
        if (ens_.size() == 0) throw precondition_error("Simulation::run before init");
        FreeSpacePoisson solver(grid_);
        cache_phi_e_nodes();

        DiagnosticSeries series;
        series.columns = make_columns();

        deposit_density(ens_, grid_, cfg_.workers);
        solver.solve(grid_, cfg_.eps);

        double t = 0.0;
        int step = 0;
        record(series, t);
        if (snapshot_ && cfg_.snapshot_every > 0) snapshot_(0, 0.0, ens_, grid_);

        const double sqeps = std::sqrt(cfg_.eps);
        while (t < cfg_.t_final - 1e-12 * cfg_.t_final) {
            double dt = cfg_.dt_factor * sqeps;
            const double vmax = max_speed();
            if (vmax > 0.0) dt = std::min(dt, cfg_.cfl * min_h() / vmax);
            dt = std::min(dt, cfg_.t_final - t);

            kick(ens_, grid_, eq_, 0.5 * dt);
            drift(ens_, dt);
            deposit_density(ens_, grid_, cfg_.workers);
            solver.solve(grid_, cfg_.eps);
            kick(ens_, grid_, eq_, 0.5 * dt);
            if (cfg_.theta > 0.0)
                fokker_planck_step(ens_, dt, cfg_.seed, std::uint32_t(step));

            t += dt;
            ++step;
            if (step % cfg_.diag_every == 0 || t >= cfg_.t_final - 1e-12 * cfg_.t_final)
                record(series, t);
            if (snapshot_ && cfg_.snapshot_every > 0 && step % cfg_.snapshot_every == 0)
                snapshot_(step, t, ens_, grid_);
        }
        return series;
    }

    const std::vector<double>& phi_e_nodes() const { return phie_nodes_; }

private:
    Equilibrium eq_;
    SimConfig cfg_;
    FieldGrid grid_;
    ParticleEnsemble ens_;
    VelocityField vfield_ = [](double, const Vec& x) { return Vec::zero(x.dim); };
    std::vector<TestField> test_fields_;
    SnapshotHook snapshot_;
    std::vector<double> phie_nodes_;

    double inradius() const {
        switch (eq_.domain.kind) {
            case DomainKind::ball:
            case DomainKind::radial_support: return eq_.domain.R;
            case DomainKind::interval: return 0.5 * (eq_.domain.a_plus - eq_.domain.a_minus);
            case DomainKind::ellipsoid_domain: {
                double m = eq_.domain.axes[0];
                for (int j = 1; j < eq_.dim; ++j) m = std::min(m, eq_.domain.axes[j]);
                return m;
            }
        }
        return 1.0;
    }

    void build_grid() {
        if (cfg_.box_margin < 1.0)
            throw config_error("box_margin must be >= 1 (box must contain K plus a "
                               "margin of at least diam(K))");
        std::array<double, 3> lo{}, hi{};
        std::array<int, 3> n{1, 1, 1};
        double kmin[3], kmax[3];
        for (int d = 0; d < eq_.dim; ++d) {
            if (eq_.domain.kind == DomainKind::interval) {
                kmin[d] = eq_.domain.a_minus;
                kmax[d] = eq_.domain.a_plus;
            } else if (eq_.domain.kind == DomainKind::ellipsoid_domain) {
                kmin[d] = -eq_.domain.axes[d];
                kmax[d] = eq_.domain.axes[d];
            } else {
                kmin[d] = -eq_.domain.R;
                kmax[d] = eq_.domain.R;
            }
        }
        double diam = 0.0;
        for (int d = 0; d < eq_.dim; ++d) diam = std::max(diam, kmax[d] - kmin[d]);
        for (int d = 0; d < eq_.dim; ++d) {
            lo[d] = kmin[d] - cfg_.box_margin * diam;
            hi[d] = kmax[d] + cfg_.box_margin * diam;
            n[d] = cfg_.cells;
        }
        grid_ = FieldGrid(eq_.dim, lo, hi, n);
        grid_.sample_background(eq_);
    }

    void cache_phi_e_nodes() {
        phie_nodes_.resize(grid_.size());
        for (int k = 0; k < grid_.n[2]; ++k)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int i = 0; i < grid_.n[0]; ++i)
                    phie_nodes_[grid_.index(i, j, k)] = eq_.phi_e(grid_.node(i, j, k));
    }

    double max_speed() const {
        double m = 0.0;
        for (int d = 0; d < ens_.dim; ++d)
            for (double v : ens_.v[d]) m = std::max(m, std::abs(v));
        return m;
    }

    double min_h() const {
        double m = grid_.h[0];
        for (int d = 1; d < grid_.dim; ++d) m = std::min(m, grid_.h[d]);
        return m;
    }

    std::vector<std::string> make_columns() const {
        std::vector<std::string> cols = {"t",      "E_kin",  "E_phi_e", "E_fluct",
                                         "H_kin",  "H_mod",  "charge"};
        for (int d = 0; d < eq_.dim; ++d) cols.push_back("momentum_" + std::to_string(d));
        cols.push_back("dist_L1");
        cols.push_back("dist_Hminus1");
        for (std::size_t i = 0; i < test_fields_.size(); ++i)
            cols.push_back("pairing_" + std::to_string(i));
        if (cfg_.theta > 0.0) {
            cols.push_back("H_fp");
            cols.push_back("entropy_estimate");
            cols.push_back("free_energy");
        }
        return cols;
    }

    void record(DiagnosticSeries& series, double t) {
        std::vector<double> row;
        const EnergyBudget eb = energy_budget(ens_, grid_, eq_);
        const ModulatedEnergy me = modulated_energy(ens_, grid_, eq_, vfield_, t);
        row.push_back(t);
        row.push_back(eb.kinetic);
        row.push_back(eb.phi_e);
        row.push_back(eb.fluct);
        row.push_back(me.kinetic_rel);
        row.push_back(me.total());
        row.push_back(ens_.charge());
        const Vec mom = total_momentum(ens_);
        for (int d = 0; d < eq_.dim; ++d) row.push_back(mom[d]);
        const DensityDistance dd = density_distance(grid_, cfg_.eps);
        row.push_back(dd.l1);
        row.push_back(dd.h_minus1);
        for (double p : current_pairings(ens_, grid_, vfield_, t, test_fields_))
            row.push_back(p);
        if (cfg_.theta > 0.0) {
            const FpEntropyReport fp =
                modulated_entropy_fp(ens_, grid_, eq_, vfield_, t, phie_nodes_);
            row.push_back(fp.h_fp);
            row.push_back(fp.entropy);
            row.push_back(eb.conserved_sum() + cfg_.theta * fp.entropy);
        }
        series.rows.push_back(std::move(row));
    }
};

} // namespace qn
