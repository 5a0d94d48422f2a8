#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qn/equilibrium/equilibrium.hpp"
#include "qn/fluid/limit_field.hpp"
#include "qn/io/config.hpp"
#include "qn/kinetic/simulation.hpp"

namespace qn {

// [potential] section -> equilibrium
inline Equilibrium equilibrium_from_config(Config& cfg) {
    if (!cfg.has_section("potential"))
        throw config_error("config: missing [potential] section");
    const std::string cls = cfg.get_string("potential", "class");
    const double mass = cfg.get_number("potential", "mass");
    if (cls == "isotropic") {
        const int dim = int(cfg.get_integer("potential", "dim", 1));
        return solve_isotropic(mass, dim);
    }
    if (cls == "quadratic") {
        const auto lam = cfg.get_list("potential", "lambda");
        if (lam.size() < 2 || lam.size() > 3)
            throw config_error("config: quadratic lambda needs 2 or 3 entries");
        std::array<double, 3> l{1.0, 1.0, 1.0};
        for (std::size_t j = 0; j < lam.size(); ++j) l[j] = lam[j];
        return solve_quadratic(l, mass, int(lam.size()));
    }
    if (cls == "radial") {
        const int dim = int(cfg.get_integer("potential", "dim", 2));
        const std::string prof = cfg.get_string("potential", "profile");
        const double coeff = cfg.get_number("potential", "coeff", 1.0);
        return solve_radial(Potential::radial(make_profile(prof, coeff, dim), dim), mass);
    }
    if (cls == "convex1d") {
        const std::string prof = cfg.get_string("potential", "profile");
        const double coeff = cfg.get_number("potential", "coeff", 1.0);
        return solve_convex_1d(Potential::convex1d(make_profile(prof, coeff, 1)), mass);
    }
    throw config_error("config: unknown potential class '" + cls + "'");
}

// [simulation] section -> SimConfig; sigma/delta accept "auto"
// (= sqrt(eps), eps) to express the well-prepared scaling. An epsilon
// override (sweeps) is applied before the auto scaling resolves.
inline SimConfig sim_config_from(Config& cfg, const double* eps_override = nullptr) {
    SimConfig sc;
    const std::string mode = cfg.get_string("simulation", "mode", "vlasov-poisson");
    if (mode == "vlasov-poisson") {
        sc.mode = SimMode::vlasov_poisson;
    } else if (mode == "vlasov-poisson-fokker-planck") {
        sc.mode = SimMode::vlasov_poisson_fokker_planck;
    } else {
        throw config_error("config: unknown simulation mode '" + mode + "'");
    }
    sc.eps = cfg.get_number("simulation", "eps", sc.eps);
    if (eps_override) sc.eps = *eps_override;
    sc.theta = cfg.get_number("simulation", "theta", sc.theta);
    sc.t_final = cfg.get_number("simulation", "t_final", sc.t_final);
    sc.dt_factor = cfg.get_number("simulation", "dt_factor", sc.dt_factor);
    sc.cfl = cfg.get_number("simulation", "cfl", sc.cfl);
    sc.n_particles = std::size_t(cfg.get_integer("simulation", "particles", 10000));
    sc.seed = std::uint64_t(cfg.get_integer("simulation", "seed", 1));
    sc.cells = int(cfg.get_integer("simulation", "cells", sc.cells));
    sc.box_margin = cfg.get_number("simulation", "box_margin", sc.box_margin);
    sc.workers = int(cfg.get_integer("simulation", "jobs", 1));

    const std::string sig = cfg.get_string("simulation", "sigma", "auto");
    sc.sigma = (sig == "auto") ? std::sqrt(sc.eps) : std::stod(sig);
    const std::string del = cfg.get_string("simulation", "delta", "auto");
    sc.delta = (del == "auto") ? sc.eps : std::stod(del);
    const std::string samp = cfg.get_string("simulation", "sampling", "rejection");
    if (samp == "rejection") sc.sampling = SamplingMode::rejection;
    else if (samp == "stratified") sc.sampling = SamplingMode::stratified;
    else throw config_error("config: unknown sampling mode '" + samp + "'");

    sc.diag_every = int(cfg.get_integer("diagnostics", "cadence", 10));
    sc.snapshot_every = int(cfg.get_integer("diagnostics", "snapshot_every", 0));
    return sc;
}

struct ReferenceSetup {
    LimitField base = LimitField::zero_field(1);
    bool extended = false; // whether a solenoidal extension wraps the base
    VelocityField field = [](double, const Vec& x) { return Vec::zero(x.dim); };
    VelocityField init_field = [](double, const Vec& x) { return Vec::zero(x.dim); };
};

// [reference] section -> limit field used for init and the modulated energy
inline ReferenceSetup reference_from_config(Config& cfg, const Equilibrium& eq) {
    ReferenceSetup rs;
    rs.base = LimitField::zero_field(eq.dim);
    const std::string fam = cfg.get_string("reference", "family", "zero");
    if (fam == "zero") {
        // 1D limit or quiescent reference
    } else if (fam == "rigid_rotation") {
        const double omega0 = cfg.get_number("reference", "omega0", 1.0);
        const double gamma = cfg.get_number("reference", "gamma", 0.0);
        rs.base = LimitField::rigid_rotation_ball(omega0, gamma, eq.support_radius());
    } else if (fam == "elliptic_rotation") {
        const double omega0 = cfg.get_number("reference", "omega0", 1.0);
        const double gamma = cfg.get_number("reference", "gamma", 0.0);
        rs.base = LimitField::elliptic_rotation(eq.ellipsoid(), omega0, gamma);
    } else if (fam == "uniform") {
        // uniform boost along x0 (dipole slosh data; not a limit solution)
        const double u0 = cfg.get_number("reference", "u0", 0.0);
        const int dim = eq.dim;
        rs.init_field = [u0, dim](double, const Vec&) {
            Vec v = Vec::zero(dim);
            v[0] = u0;
            return v;
        };
        return rs;
    } else {
        throw config_error("config: unknown reference family '" + fam + "'");
    }
    if (!rs.base.is_zero()) {
        ExtendedField ext = extend_divfree(rs.base);
        rs.field = ext.as_function();
        rs.init_field = rs.field;
        rs.extended = true;
    }
    return rs;
}

// [diagnostics] test_fields: comma list of interior Gaussian-bump widths,
// e.g. "bump:0.8" places Theta(x) = (1-|x|^2/w^2)_+^2 e_1
inline std::vector<TestField> test_fields_from_config(Config& cfg, const Equilibrium& eq) {
    std::vector<TestField> out;
    if (!cfg.has("diagnostics", "test_field_widths")) return out;
    for (double w : cfg.get_list("diagnostics", "test_field_widths")) {
        const int dim = eq.dim;
        out.push_back([w, dim](const Vec& x) {
            const double b = std::max(0.0, 1.0 - norm2(x) / (w * w));
            Vec v = Vec::zero(dim);
            v[0] = b * b;
            return v;
        });
    }
    return out;
}

} // namespace qn
