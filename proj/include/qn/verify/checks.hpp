#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qn/diagnostics/distance.hpp"
#include "qn/diagnostics/energy.hpp"
#include "qn/diagnostics/entropy.hpp"
#include "qn/equilibrium/equilibrium.hpp"
#include "qn/fluid/limit_field.hpp"
#include "qn/kinetic/simulation.hpp"

namespace qn {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0; // headroom to the threshold (positive = pass)
    std::string detail;
};

namespace checks_detail {

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

inline double now_seconds() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

} // namespace checks_detail

// 1. Z_inverse(Z_map(alpha)) = alpha to 1e-8 max-norm, 1000 random alpha in
//    [0.1, 10]^N for N = 2 (closed forms) and N = 3 (Newton); runtime < 5 s.
inline CheckResult check_z_roundtrip() {
    CheckResult r;
    r.name = "Z round-trip (N=2 closed form, N=3 Newton)";
    const double t0 = checks_detail::now_seconds();
    double worst = 0.0;
    RngStream rng(20240501, 0, 0);
    for (int dim = 2; dim <= 3; ++dim) {
        for (int trial = 0; trial < 1000; ++trial) {
            AlphaVec alpha{0.0, 0.0, 0.0};
            for (int j = 0; j < dim; ++j) alpha[j] = 0.1 + 9.9 * rng.uniform();
            const AlphaVec back = Z_inverse(Z_map(alpha, dim), dim);
            for (int j = 0; j < dim; ++j)
                worst = std::max(worst, std::abs(back[j] - alpha[j]));
        }
    }
    const double elapsed = checks_detail::now_seconds() - t0;
    r.pass = worst < 1e-8 && elapsed < 5.0;
    r.margin = 1e-8 - worst;
    r.detail = checks_detail::fmt("worst |Z^-1(Z(a))-a| = %.3g (tol 1e-8), %.2f s", worst,
                                  elapsed);
    return r;
}

// 2. N=3 unit ball potential: 1/2 at the center and 1/6 at |x|=2 to 1e-8;
//    FD Laplacian of Gamma*1_{K_a}, a=(2,1,1): -1 inside / 0 outside at
//    O(h^2), points >= 3h from the boundary.
inline CheckResult check_ellipsoid_potential() {
    CheckResult r;
    r.name = "ellipsoid Newtonian potential exactness";
    NewtonianEllipsoidPotential ball(Ellipsoid(1.0, 1.0, 1.0));
    const double e_center = std::abs(ball.value(Vec(0.0, 0.0, 0.0)) - 0.5);
    const double e_out = std::abs(ball.value(Vec(2.0, 0.0, 0.0)) - 1.0 / 6.0);

    NewtonianEllipsoidPotential pot(Ellipsoid(2.0, 1.0, 1.0));
    auto lap = [&](const Vec& x, double h) {
        double acc = -6.0 * pot.value(x);
        for (int j = 0; j < 3; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            acc += pot.value(xp) + pot.value(xm);
        }
        return acc / (h * h);
    };
    const std::vector<Vec> inside = {Vec(0.3, 0.2, -0.1), Vec(-1.2, 0.1, 0.3),
                                     Vec(0.8, -0.5, 0.2)};
    const std::vector<Vec> outside = {Vec(2.4, 0.6, 0.0), Vec(0.0, 1.5, 0.6),
                                      Vec(-1.8, -0.9, 0.7)};
    double worst1 = 0.0, worst2 = 0.0;
    for (double h : {0.04, 0.02}) {
        double& worst = (h == 0.04) ? worst1 : worst2;
        for (const auto& x : inside) worst = std::max(worst, std::abs(lap(x, h) + 1.0));
        for (const auto& x : outside) worst = std::max(worst, std::abs(lap(x, h)));
    }
    const bool values_ok = e_center < 1e-8 && e_out < 1e-8;
    const bool order_ok = worst2 < 0.35 * worst1 + 1e-9 && worst2 < 10.0 * 0.02 * 0.02;
    r.pass = values_ok && order_ok;
    r.margin = 1e-8 - std::max(e_center, e_out);
    r.detail = checks_detail::fmt("ball errs %.2g/%.2g (tol 1e-8)", e_center, e_out) +
               checks_detail::fmt("; FD defect %.3g -> %.3g under h/2", worst1, worst2);
    return r;
}

// 3. quadratic equilibria across 100 random (lambda, m): mass identity and
//    2D aspect ratio to 1e-8; Phi_e >= 0, = 0 on K, FD Laplacian =
//    sum(lambda^-2) outside at O(h^2).
inline CheckResult check_quadratic_equilibrium() {
    CheckResult r;
    r.name = "quadratic equilibrium consistency";
    RngStream rng(77001, 0, 0);
    double worst_mass = 0.0, worst_aspect = 0.0, worst_sign = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = (trial % 2) ? 3 : 2;
        std::array<double, 3> lam{1.0, 1.0, 1.0};
        for (int j = 0; j < dim; ++j) lam[j] = 0.5 + 1.5 * rng.uniform();
        const double m = 0.5 + 4.5 * rng.uniform();
        const Equilibrium eq = solve_quadratic(lam, m, dim);
        worst_mass = std::max(worst_mass, std::abs(eq.mass_quadrature() - m) / m);
        if (dim == 2) {
            const double want = (lam[0] / lam[1]) * (lam[0] / lam[1]);
            worst_aspect = std::max(
                worst_aspect,
                std::abs(eq.domain.axes[0] / eq.domain.axes[1] - want) / want);
        }
        // spot sign/support checks
        const Ellipsoid e = eq.ellipsoid();
        const double ang = 2.0 * M_PI * rng.uniform();
        Vec xin = Vec::zero(dim), xout = Vec::zero(dim);
        xin[0] = 0.5 * e.a[0] * std::cos(ang);
        xin[1] = 0.5 * e.a[1] * std::sin(ang);
        xout[0] = 1.7 * e.a[0] * std::cos(ang);
        xout[1] = 1.7 * e.a[1] * std::sin(ang);
        if (eq.phi_e(xin) != 0.0) worst_sign = 1.0;
        if (!(eq.phi_e(xout) > 0.0)) worst_sign = 1.0;
    }

    // PDE check: Laplacian of Phi_e = sum(lambda^-2) outside K, 0 inside
    auto fd_lap = [](const Equilibrium& eq, const Vec& x, double h) {
        double acc = -2.0 * eq.dim * eq.phi_e(x);
        for (int j = 0; j < eq.dim; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            acc += eq.phi_e(xp) + eq.phi_e(xm);
        }
        return acc / (h * h);
    };
    const Equilibrium eq2 = solve_quadratic({1.6, 0.9, 1.0}, 2.5, 2);
    const Equilibrium eq3 = solve_quadratic({1.2, 1.0, 0.8}, 1.5, 3);
    double pde_defect = 0.0;
    {
        const double S = eq2.potential.inv_lambda2_sum();
        const Vec xo(1.5 * eq2.domain.axes[0], 0.8 * eq2.domain.axes[1]);
        pde_defect = std::max(pde_defect, std::abs(fd_lap(eq2, xo, 1e-3) - S) / S);
        const Vec xi(0.4 * eq2.domain.axes[0], -0.3 * eq2.domain.axes[1]);
        pde_defect = std::max(pde_defect, std::abs(fd_lap(eq2, xi, 1e-3)));
    }
    {
        const double S = eq3.potential.inv_lambda2_sum();
        Vec xo = Vec::zero(3);
        xo[0] = 1.4 * eq3.domain.axes[0];
        xo[2] = 0.9 * eq3.domain.axes[2];
        pde_defect = std::max(pde_defect, std::abs(fd_lap(eq3, xo, 1e-3) - S) / S);
    }

    const double worst = std::max(worst_mass, worst_aspect);
    r.pass = worst < 1e-8 && worst_sign == 0.0 && pde_defect < 1e-4;
    r.margin = 1e-8 - worst;
    r.detail = checks_detail::fmt(
        "mass err %.2g, aspect err %.2g (tol 1e-8), PDE defect %.2g", worst_mass,
        worst_aspect, pde_defect);
    return r;
}

// 4. 1D convex Phi = x^2/2, m = 2: a_+- = +-1, C* = -1/2, Phi_e matches
//    (|x|-1)^2/2 to 1e-10 on [-3,3]; boundary-equation residuals < 1e-12.
inline CheckResult check_convex_1d() {
    CheckResult r;
    r.name = "1D convex equilibrium exactness";
    Potential pot = Potential::convex1d(make_profile("harmonic", 1.0, 1));
    const Equilibrium eq = solve_convex_1d(pot, 2.0);
    const double e_a = std::max(std::abs(eq.domain.a_plus - 1.0),
                                std::abs(eq.domain.a_minus + 1.0));
    const double e_c = std::abs(eq.robin_constant + 0.5);
    double e_phi = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double x = -3.0 + 6.0 * i / 600.0;
        const double want = (std::abs(x) <= 1.0) ? 0.0 : 0.5 * std::pow(std::abs(x) - 1.0, 2);
        e_phi = std::max(e_phi, std::abs(eq.phi_e(Vec(x)) - want));
    }
    const double res_p = std::abs(eq.potential.profile.df(eq.domain.a_plus) - 1.0);
    const double res_m = std::abs(eq.potential.profile.df(eq.domain.a_minus) + 1.0);
    const double res = std::max(res_p, res_m);
    r.pass = e_a < 1e-10 && e_c < 1e-12 && e_phi < 1e-10 && res < 1e-12;
    r.margin = 1e-10 - std::max(e_phi, e_a);
    r.detail = checks_detail::fmt("a+- err %.2g, C* err %.2g, Phi_e err %.2g", e_a, e_c,
                                  e_phi) + checks_detail::fmt(", root residual %.2g", res);
    return r;
}

// 5. radial phi(r) = r, N=2, m=2pi: R=1, n_e = 1/|x|, mass quadrature to
//    1e-8, |Phi_e(R)| < 1e-10 with continuity across R.
inline CheckResult check_radial() {
    CheckResult r;
    r.name = "radial equilibrium (linear profile)";
    Potential pot = Potential::radial(make_profile("linear", 1.0, 2), 2);
    const Equilibrium eq = solve_radial(pot, 2.0 * M_PI);
    const double e_R = std::abs(eq.domain.R - 1.0);
    double e_ne = 0.0;
    for (double rr : {0.2, 0.5, 0.9}) {
        e_ne = std::max(e_ne, std::abs(eq.n_e(Vec(rr, 0.0)) - 1.0 / rr) * rr);
    }
    const double e_mass = std::abs(eq.mass_quadrature() - 2.0 * M_PI) / (2.0 * M_PI);
    const double phi_at_R = std::abs(eq.phi_e(Vec(1.0, 0.0)));
    const double phi_near = std::abs(eq.phi_e(Vec(1.0 + 1e-8, 0.0)));
    r.pass = e_R < 1e-10 && e_ne < 1e-12 && e_mass < 1e-8 && phi_at_R < 1e-10 &&
             phi_near < 1e-10;
    r.margin = 1e-8 - e_mass;
    r.detail = checks_detail::fmt("R err %.2g, n_e err %.2g, mass err %.2g", e_R, e_ne,
                                  e_mass) + checks_detail::fmt(", |Phi_e(R)| %.2g", phi_at_R);
    return r;
}

// 6. boundary-flux inequality on K_a, a = (2,1): the ratio
//    |V . grad Phi_e| / Phi_e over shells at distances 10^-k, k = 1..6,
//    stays below a single constant with no growth trend across k.
inline CheckResult check_boundary_flux() {
    CheckResult r;
    r.name = "boundary-flux inequality near the ellipse";
    // lambda_j^{-2} = Z_j(a^2) with m = 2 pi puts the support exactly on
    // a = (2,1)
    const AlphaVec z = Z_map({4.0, 1.0, 0.0}, 2);
    const std::array<double, 3> lam{1.0 / std::sqrt(z[0]), 1.0 / std::sqrt(z[1]), 1.0};
    const Equilibrium eq = solve_quadratic(lam, 2.0 * M_PI, 2);
    const Ellipsoid e = eq.ellipsoid();
    if (std::abs(e.a[0] - 2.0) > 1e-10 || std::abs(e.a[1] - 1.0) > 1e-10) {
        r.detail = "failed to target the (2,1) ellipse";
        return r;
    }
    auto field = LimitField::elliptic_rotation(e, 1.0, 0.0);
    auto V = [&](const Vec& x) { return field.velocity(0.0, x); };

    std::vector<double> shell_bounds;
    for (int k = 1; k <= 6; ++k) {
        const double d = std::pow(10.0, -k);
        std::vector<Vec> shell;
        for (int i = 0; i < 128; ++i) {
            const double ang = 2.0 * M_PI * (i + 0.31) / 128.0;
            const Vec xb(e.a[0] * std::cos(ang), e.a[1] * std::sin(ang));
            Vec nrm = e.normal_direction(xb);
            nrm *= 1.0 / norm(nrm);
            shell.push_back(xb + d * nrm);
        }
        shell_bounds.push_back(boundary_flux_bound(eq, V, shell));
    }
    double cap = 1.5 * std::max(shell_bounds[0], shell_bounds[1]);
    bool ok = true;
    double worst = 0.0;
    for (double b : shell_bounds) {
        worst = std::max(worst, b);
        if (!(b <= cap) || !std::isfinite(b)) ok = false;
    }
    r.pass = ok;
    r.margin = cap - worst;
    r.detail = "shell ratios";
    for (double b : shell_bounds) r.detail += checks_detail::fmt(" %.3g", b);
    r.detail += checks_detail::fmt(" (cap %.3g)", cap);
    return r;
}

// 7. conserved-sum drift at desk scale: N=1, eps=1e-2, 1e4 particles, dt=0.05
//    sqrt(eps), T=1: relative drift of the conserved sum < 1e-3, charge
//    bitwise constant, runtime < 30 s.
inline CheckResult check_energy_conservation() {
    CheckResult r;
    r.name = "energy conservation (Vlasov-Poisson)";
    const double t0 = checks_detail::now_seconds();
    const Equilibrium eq = solve_isotropic(2.0, 1);
    SimConfig cfg;
    cfg.eps = 1e-2;
    cfg.t_final = 1.0;
    cfg.dt_factor = 0.05;
    cfg.cfl = 1e9; // the criterion pins dt = 0.05 sqrt(eps); keep the CFL cap out
    cfg.n_particles = 10000;
    cfg.cells = 513;
    cfg.seed = 42;
    cfg.sigma = std::sqrt(cfg.eps);
    cfg.delta = cfg.eps;
    cfg.sampling = SamplingMode::stratified;
    cfg.diag_every = 10;
    Simulation sim(eq, cfg);
    // dipole slosh: macroscopic energy cycles through all three channels
    sim.init([](double, const Vec& x) {
        Vec v = Vec::zero(x.dim);
        v[0] = 0.5;
        return v;
    });
    const DiagnosticSeries s = sim.run();
    const auto ek = s.column("E_kin"), ep = s.column("E_phi_e"), ef = s.column("E_fluct");
    const auto charge = s.column("charge");
    const double e0 = ek[0] + ep[0] + ef[0];
    double drift = 0.0;
    bool charge_const = true;
    for (std::size_t i = 0; i < ek.size(); ++i) {
        drift = std::max(drift, std::abs(ek[i] + ep[i] + ef[i] - e0));
        if (charge[i] != charge[0]) charge_const = false;
    }
    const double rel = drift / e0;
    const double elapsed = checks_detail::now_seconds() - t0;
    r.pass = rel < 1e-3 && charge_const && elapsed < 30.0;
    r.margin = 1e-3 - rel;
    r.detail = checks_detail::fmt("relative drift %.3g (tol 1e-3), %.1f s", rel, elapsed) +
               (charge_const ? ", charge bitwise constant" : ", CHARGE DRIFTED");
    return r;
}

// 8. quasi-neutral convergence, 1D, Phi = x^2/2, m=2, well-prepared data
//    (sigma = sqrt(eps), delta = eps): across eps in {1e-1, 1e-2, 1e-3},
//    H(T=1) and sqrt(eps)||grad Psi||(T=1) decrease monotonically within a
//    20% band and the interior current pairing tends to 0.
inline CheckResult check_quasineutral_sweep() {
    CheckResult r;
    r.name = "quasi-neutral convergence sweep (1D)";
    const Equilibrium eq = solve_isotropic(2.0, 1);
    std::vector<double> h_T, dist_T, pair_rms;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        SimConfig cfg;
        cfg.eps = eps;
        cfg.t_final = 1.0;
        cfg.n_particles = 40000;
        cfg.cells = 513;
        cfg.seed = 7;
        cfg.sigma = std::sqrt(eps);
        cfg.delta = eps;
        cfg.sampling = SamplingMode::stratified;
        cfg.diag_every = 10;
        Simulation sim(eq, cfg);
        sim.set_test_fields({[](const Vec& x) {
            const double b = std::max(0.0, 1.0 - norm2(x) / 0.64);
            Vec v = Vec::zero(1);
            v[0] = b * b;
            return v;
        }});
        sim.init([](double, const Vec& x) { return Vec::zero(x.dim); });
        const DiagnosticSeries s = sim.run();
        h_T.push_back(s.column("H_mod").back());
        dist_T.push_back(s.column("dist_Hminus1").back());
        const auto pr = s.column("pairing_0");
        double acc = 0.0;
        for (double p : pr) acc += p * p;
        pair_rms.push_back(std::sqrt(acc / pr.size()));
    }
    // H and the H^-1 distance must decrease monotonically within a 20%
    // noise band; the pairing (noise-floor limited at small eps) must tend
    // to zero across the sweep
    bool ok = true;
    double worst_ratio = 0.0;
    for (int k = 0; k < 2; ++k) {
        worst_ratio = std::max(worst_ratio, h_T[k + 1] / h_T[k]);
        worst_ratio = std::max(worst_ratio, dist_T[k + 1] / dist_T[k]);
        if (h_T[k + 1] > 1.2 * h_T[k]) ok = false;
        if (dist_T[k + 1] > 1.2 * dist_T[k]) ok = false;
    }
    if (!(h_T.back() < h_T.front() && dist_T.back() < dist_T.front())) ok = false;
    if (!(pair_rms.back() < 0.25 * pair_rms.front())) ok = false;
    r.pass = ok;
    r.margin = 1.2 - worst_ratio;
    r.detail = checks_detail::fmt("H(T): %.3g/%.3g/%.3g", h_T[0], h_T[1], h_T[2]) +
               checks_detail::fmt("; dist: %.3g/%.3g/%.3g", dist_T[0], dist_T[1], dist_T[2]) +
               checks_detail::fmt("; pairing RMS: %.3g/%.3g/%.3g", pair_rms[0], pair_rms[1],
                                  pair_rms[2]);
    return r;
}

// 9. Gronwall trend: 2D disk, rigid rotation, gamma=0, eps=1e-2:
//    H(t) <= e^{Ct}(H(0)+tol) over T=0.5 with fitted C <= 10.
inline CheckResult check_gronwall() {
    CheckResult r;
    r.name = "Gronwall bound for the 2D rotating disk";
    const Equilibrium eq = solve_isotropic(M_PI, 2);
    auto base = LimitField::rigid_rotation_ball(1.0, 0.0, eq.domain.R);
    auto ext = extend_divfree(base);
    SimConfig cfg;
    cfg.eps = 1e-2;
    cfg.t_final = 0.5;
    cfg.n_particles = 80000;
    cfg.cells = 129;
    cfg.seed = 5;
    cfg.sigma = std::sqrt(cfg.eps);
    cfg.delta = cfg.eps;
    cfg.sampling = SamplingMode::stratified;
    cfg.diag_every = 5;
    Simulation sim(eq, cfg);
    sim.set_reference_field(ext.as_function());
    sim.init(ext.as_function());
    const DiagnosticSeries s = sim.run();
    const GronwallReport rep =
        gronwall_check(s.column("t"), s.column("H_mod"), 10.0, cfg.n_particles);
    r.pass = rep.pass && rep.fitted_c <= 10.0;
    r.margin = 10.0 - rep.fitted_c;
    r.detail = checks_detail::fmt("fitted C = %.2f (cap 10), tol = %.2g, margin %.3g",
                                  rep.fitted_c, rep.tol, -rep.max_margin);
    return r;
}

// 10. Fokker-Planck: OU moment laws at 5% with 1e5 samples; VPFP free
//     energy nonincreasing within 3 sigma Monte-Carlo bands over T=1,
//     theta=0.1.
inline CheckResult check_fokker_planck() {
    CheckResult r;
    r.name = "Fokker-Planck step and free-energy decay";
    // OU moments
    ParticleEnsemble ou;
    ou.dim = 1;
    ou.theta = 0.3;
    const int nou = 100000;
    ou.x[0].assign(nou, 0.0);
    ou.v[0].assign(nou, 1.0);
    ou.w.assign(nou, 1.0 / nou);
    const double dt = 0.25;
    const int steps = 6;
    for (int s = 0; s < steps; ++s) fokker_planck_step(ou, dt, 99, s);
    const double t = steps * dt;
    double mean = 0.0, var = 0.0;
    for (double v : ou.v[0]) mean += v;
    mean /= nou;
    for (double v : ou.v[0]) var += (v - mean) * (v - mean);
    var /= nou;
    const double mean_err = std::abs(mean - std::exp(-t)) / std::exp(-t);
    const double var_want = ou.theta * (1.0 - std::exp(-2.0 * t));
    const double var_err = std::abs(var - var_want) / var_want;

    // VPFP run
    const Equilibrium eq = solve_isotropic(2.0, 1);
    SimConfig cfg;
    cfg.mode = SimMode::vlasov_poisson_fokker_planck;
    cfg.eps = 1e-2;
    cfg.theta = 0.1;
    cfg.t_final = 1.0;
    cfg.n_particles = 20000;
    cfg.cells = 257;
    cfg.seed = 13;
    cfg.sigma = std::sqrt(cfg.eps);
    cfg.delta = cfg.eps;
    cfg.sampling = SamplingMode::stratified;
    cfg.diag_every = 5;
    Simulation sim(eq, cfg);
    sim.init([](double, const Vec& x) {
        Vec v = Vec::zero(x.dim);
        v[0] = 0.4; // macroscopic motion for the friction to dissipate
        return v;
    });
    const DiagnosticSeries s = sim.run();
    const auto fe = s.column("free_energy");
    // 3 sigma band from the series' own high-frequency fluctuation
    std::vector<double> diffs;
    for (std::size_t i = 1; i < fe.size(); ++i) diffs.push_back(fe[i] - fe[i - 1]);
    double mu = 0.0;
    for (double d : diffs) mu += d;
    mu /= diffs.size();
    double sd = 0.0;
    for (double d : diffs) sd += (d - mu) * (d - mu);
    sd = std::sqrt(sd / diffs.size());
    const double band = 3.0 * sd;
    bool monotone = true;
    double running_min = fe.front(), worst_rise = 0.0;
    for (double v : fe) {
        worst_rise = std::max(worst_rise, v - running_min);
        if (v > running_min + band) monotone = false;
        running_min = std::min(running_min, v);
    }
    const bool decayed = fe.back() < fe.front();

    r.pass = mean_err < 0.05 && var_err < 0.05 && monotone && decayed;
    r.margin = 0.05 - std::max(mean_err, var_err);
    r.detail = checks_detail::fmt("OU errs mean %.3g var %.3g (tol 5%%)", mean_err, var_err) +
               checks_detail::fmt("; FE %.4g -> %.4g, worst rise %.2g within band",
                                  fe.front(), fe.back(), worst_rise);
    return r;
}

// 11. solenoidal extension: equality on B(0,R), zero outside B(0,2R),
//     discrete divergence < 1e-8 max|V|.
inline CheckResult check_extension() {
    CheckResult r;
    r.name = "divergence-free extension of the rigid rotation";
    const double R = 1.0;
    auto base = LimitField::rigid_rotation_ball(1.0, 0.0, R);
    auto ext = extend_divfree(base);
    double eq_err = 0.0, out_err = 0.0, maxv = 0.0, maxdiv = 0.0;
    const double hfd = 1e-6;
    for (int i = 0; i <= 48; ++i)
        for (int j = 0; j <= 48; ++j) {
            const Vec x(-2.4 + 4.8 * i / 48.0, -2.4 + 4.8 * j / 48.0);
            const double rr = norm(x);
            const Vec v = ext.velocity(0.3, x);
            maxv = std::max(maxv, norm(v));
            if (rr <= R) eq_err = std::max(eq_err, norm(v - base.velocity(0.3, x)));
            if (rr >= 2.0 * R) out_err = std::max(out_err, norm(v));
            Vec xp = x, xm = x, yp = x, ym = x;
            xp[0] += hfd;
            xm[0] -= hfd;
            yp[1] += hfd;
            ym[1] -= hfd;
            const double div =
                (ext.velocity(0.3, xp)[0] - ext.velocity(0.3, xm)[0]) / (2.0 * hfd) +
                (ext.velocity(0.3, yp)[1] - ext.velocity(0.3, ym)[1]) / (2.0 * hfd);
            maxdiv = std::max(maxdiv, std::abs(div));
        }
    r.pass = eq_err == 0.0 && out_err == 0.0 && maxdiv < 1e-8 * maxv;
    r.margin = 1e-8 * maxv - maxdiv;
    r.detail = checks_detail::fmt("equality err %.2g, outside err %.2g, div/|V| %.3g",
                                  eq_err, out_err, maxdiv / maxv);
    return r;
}

// 12. limit-system residuals: rotation families < 1e-6 with analytic
//     derivatives, O(h^2) convergence under FD probing.
inline CheckResult check_limit_residuals() {
    CheckResult r;
    r.name = "friction-Euler residuals of the rotation families";
    std::vector<std::pair<double, Vec>> probes;
    RngStream rng(3111, 0, 0);
    Ellipsoid e(2.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double ang = 2.0 * M_PI * rng.uniform();
        const double rad = 0.95 * rng.uniform();
        probes.push_back({1.5 * rng.uniform(),
                          Vec(rad * e.a[0] * std::cos(ang), rad * e.a[1] * std::sin(ang))});
    }
    auto rigid = LimitField::rigid_rotation_ball(1.3, 0.7, 1.0);
    auto ellip = LimitField::elliptic_rotation(e, 0.9, 0.4);
    const double res_r = limit_residual(rigid, 0.7, probes).max_residual;
    const double res_e = limit_residual(ellip, 0.4, probes).max_residual;
    const double fd1 = limit_residual(ellip, 0.4, probes, false, 1e-2).max_residual;
    const double fd2 = limit_residual(ellip, 0.4, probes, false, 5e-3).max_residual;
    const bool order = fd2 < 0.35 * fd1 + 1e-12;
    r.pass = res_r < 1e-6 && res_e < 1e-6 && order;
    r.margin = 1e-6 - std::max(res_r, res_e);
    r.detail = checks_detail::fmt("analytic residuals %.2g / %.2g (tol 1e-6)", res_r, res_e) +
               checks_detail::fmt("; FD %.2g -> %.2g under h/2", fd1, fd2);
    return r;
}

inline std::vector<CheckResult> run_acceptance_checks(bool quick_only = false) {
    std::vector<CheckResult> out;
    out.push_back(check_z_roundtrip());
    out.push_back(check_ellipsoid_potential());
    out.push_back(check_quadratic_equilibrium());
    out.push_back(check_convex_1d());
    out.push_back(check_radial());
    out.push_back(check_boundary_flux());
    if (!quick_only) {
        out.push_back(check_energy_conservation());
        out.push_back(check_quasineutral_sweep());
        out.push_back(check_gronwall());
        out.push_back(check_fokker_planck());
    }
    out.push_back(check_extension());
    out.push_back(check_limit_residuals());
    return out;
}

// Bookkeeping: residuals of the two circulating variants of the semi-axis
// condition (with and without the extra sum(lambda^-2) factor), reported
// informally by `verify`.
struct SemiAxisVariants {
    double residual_implemented = 0.0; // (m / 2|B_1|) Z(a^2) = lambda^{-2}
    double residual_printed = 0.0;     // extra sum(lambda^-2) factor variant
};

inline SemiAxisVariants semi_axis_variants_report() {
    const std::array<double, 3> lam{2.0, 1.0, 1.0};
    const double m = 3.0;
    const Equilibrium eq = solve_quadratic(lam, m, 2);
    AlphaVec a2{eq.domain.axes[0] * eq.domain.axes[0],
                eq.domain.axes[1] * eq.domain.axes[1], 0.0};
    const AlphaVec z = Z_map(a2, 2);
    const double S = eq.potential.inv_lambda2_sum();
    SemiAxisVariants kv;
    for (int j = 0; j < 2; ++j) {
        const double lhs_impl = m / (2.0 * unit_ball_volume(2)) * z[j];
        const double lhs_printed = lhs_impl / S;
        const double rhs = 1.0 / (lam[j] * lam[j]);
        kv.residual_implemented = std::max(kv.residual_implemented,
                                           std::abs(lhs_impl - rhs) / rhs);
        kv.residual_printed = std::max(kv.residual_printed,
                                       std::abs(lhs_printed - rhs) / rhs);
    }
    return kv;
}

} // namespace qn
