// qnsim: configuration-driven driver for the quasi-neutral plasma lab.
// Subcommands: equilibrium, simulate, sweep, verify, plot.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "qn/io/config.hpp"
#include "qn/io/manifest.hpp"
#include "qn/io/run_setup.hpp"
#include "qn/io/snapshots.hpp"
#include "qn/io/svg.hpp"
#include "qn/verify/checks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string eps_list;
    int jobs = 1;
};

void ensure_dir(const std::string& d) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw qn::config_error("cannot create output directory '" + d + "'");
}

json domain_json(const qn::Equilibrium& eq) {
    json j;
    switch (eq.domain.kind) {
        case qn::DomainKind::ball:
            j["kind"] = "ball";
            j["R"] = eq.domain.R;
            break;
        case qn::DomainKind::radial_support:
            j["kind"] = "radial_support";
            j["R"] = eq.domain.R;
            j["R_min"] = eq.domain.R_min;
            break;
        case qn::DomainKind::ellipsoid_domain: {
            j["kind"] = "ellipsoid";
            json axes = json::array();
            for (int d = 0; d < eq.dim; ++d) axes.push_back(eq.domain.axes[d]);
            j["axes"] = axes;
            break;
        }
        case qn::DomainKind::interval:
            j["kind"] = "interval";
            j["a_minus"] = eq.domain.a_minus;
            j["a_plus"] = eq.domain.a_plus;
            break;
    }
    return j;
}

void write_equilibrium_profile(const std::string& path, const qn::Equilibrium& eq,
                               int axis) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qn::config_error("cannot open '" + path + "'");
    f << "coord,n_e,phi_e,grad_phi_e_norm\n";
    const double Rb = eq.support_radius();
    double lo = 0.0, hi = 2.5 * Rb;
    if (eq.domain.kind == qn::DomainKind::interval) {
        const double pad = eq.domain.a_plus - eq.domain.a_minus;
        lo = eq.domain.a_minus - pad;
        hi = eq.domain.a_plus + pad;
    }
    char buf[160];
    for (int i = 0; i <= 800; ++i) {
        const double c = lo + (hi - lo) * i / 800.0;
        qn::Vec x = qn::Vec::zero(eq.dim);
        x[axis] = c;
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", c, eq.n_e(x),
                      eq.phi_e(x), qn::norm(eq.grad_phi_e(x)));
        f << buf;
    }
}

int cmd_equilibrium(const CommonOpts& opt) {
    qn::Config cfg = qn::Config::load(opt.config_path);
    qn::Equilibrium eq = qn::equilibrium_from_config(cfg);
    cfg.finish({"potential"});
    ensure_dir(opt.out_dir);
    qn::RunManifest manifest(opt.out_dir, "equilibrium", 0, cfg.resolved_text());

    write_equilibrium_profile(opt.out_dir + "/profile.csv", eq, 0);
    manifest.add_output("profile.csv");
    if (eq.dim >= 2 && eq.domain.kind == qn::DomainKind::ellipsoid_domain) {
        write_equilibrium_profile(opt.out_dir + "/profile_axis1.csv", eq, 1);
        manifest.add_output("profile_axis1.csv");
    }

    json summary;
    summary["class"] = qn::to_string(eq.potential.cls);
    summary["domain_params"] = domain_json(eq);
    summary["mass"] = eq.mass;
    summary["robin_constant"] = eq.robin_constant;
    if (eq.domain.kind == qn::DomainKind::ellipsoid_domain && eq.dim == 2)
        summary["aspect_ratio"] = eq.domain.axes[0] / eq.domain.axes[1];
    std::ofstream js(opt.out_dir + "/summary.json", std::ios::binary);
    js << summary.dump(2) << "\n";
    manifest.add_output("summary.json");
    manifest.finalize(true);
    std::printf("equilibrium: %s, mass %.6g, C* %.6g -> %s\n",
                qn::to_string(eq.potential.cls), eq.mass, eq.robin_constant,
                opt.out_dir.c_str());
    return 0;
}

int run_single_simulation(qn::Config cfg, const std::string& out_dir,
                          std::uint64_t seed_override, bool seed_set, int jobs,
                          const double* eps_override = nullptr) {
    qn::Equilibrium eq = qn::equilibrium_from_config(cfg);
    qn::SimConfig sc = qn::sim_config_from(cfg, eps_override);
    if (seed_set) sc.seed = seed_override;
    if (jobs > 1) sc.workers = jobs;
    qn::ReferenceSetup ref = qn::reference_from_config(cfg, eq);
    auto test_fields = qn::test_fields_from_config(cfg, eq);
    cfg.finish({"potential", "simulation", "reference", "diagnostics"});

    ensure_dir(out_dir);
    qn::RunManifest manifest(out_dir, "simulate", sc.seed, cfg.resolved_text());

    qn::Simulation sim(eq, sc);
    sim.set_reference_field(ref.field);
    sim.set_test_fields(test_fields);
    if (sc.snapshot_every > 0) {
        sim.set_snapshot_hook([&](int step, double, const qn::ParticleEnsemble& ens,
                                  const qn::FieldGrid& grid) {
            char name[64];
            std::snprintf(name, sizeof name, "particles_%06d.csv", step);
            qn::write_particles_csv(out_dir + "/" + name, ens);
            std::snprintf(name, sizeof name, "grid_%06d.csv", step);
            qn::write_grid_csv(out_dir + "/" + name, grid);
        });
    }
    sim.init(ref.init_field);
    const qn::DiagnosticSeries series = sim.run();
    series.save(out_dir + "/series.csv");
    manifest.add_output("series.csv");
    manifest.finalize(true);
    return 0;
}

int cmd_simulate(const CommonOpts& opt) {
    qn::Config cfg = qn::Config::load(opt.config_path);
    const int rc = run_single_simulation(std::move(cfg), opt.out_dir, opt.seed,
                                         opt.seed_set, opt.jobs);
    std::printf("simulate: wrote %s/series.csv\n", opt.out_dir.c_str());
    return rc;
}

int cmd_sweep(const CommonOpts& opt) {
    std::vector<double> eps_values;
    {
        std::istringstream is(opt.eps_list);
        std::string cell;
        while (std::getline(is, cell, ',')) {
            if (!cell.empty()) eps_values.push_back(std::stod(cell));
        }
    }
    if (eps_values.size() < 2)
        throw qn::config_error("sweep needs at least 2 epsilon values (--eps a,b,...)");

    ensure_dir(opt.out_dir);
    qn::Config base = qn::Config::load(opt.config_path);
    qn::RunManifest manifest(opt.out_dir, "sweep", opt.seed_set ? opt.seed : 0,
                             base.resolved_text());

    // children run with a fixed seed policy: identical seed, epsilon varies
    std::vector<std::string> child_dirs(eps_values.size());
    std::vector<std::exception_ptr> errors(eps_values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < eps_values.size();
             i = next.fetch_add(1)) {
            try {
                char sub[48];
                std::snprintf(sub, sizeof sub, "eps_%g", eps_values[i]);
                child_dirs[i] = opt.out_dir + "/" + sub;
                qn::Config cfg = qn::Config::load(opt.config_path);
                run_single_simulation(std::move(cfg), child_dirs[i], opt.seed,
                                      opt.seed_set, 1, &eps_values[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(opt.jobs, int(eps_values.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // aggregate
    qn::DiagnosticSeries agg;
    agg.columns = {"eps", "H_T", "dist_Hminus1_T", "pairing_rms"};
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
        const qn::DiagnosticSeries s =
            qn::DiagnosticSeries::load(child_dirs[i] + "/series.csv");
        double prms = 0.0;
        if (s.column_index("pairing_0") >= 0) {
            const auto pr = s.column("pairing_0");
            for (double p : pr) prms += p * p;
            prms = std::sqrt(prms / pr.size());
        }
        agg.rows.push_back({eps_values[i], s.column("H_mod").back(),
                            s.column("dist_Hminus1").back(), prms});
        manifest.add_child(child_dirs[i] + "/manifest.json");
    }
    agg.save(opt.out_dir + "/sweep.csv");
    manifest.add_output("sweep.csv");

    json mono;
    auto monotone = [&](const std::string& col) {
        const auto v = agg.column(col);
        bool dec = true;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[i - 1]) dec = false;
        return dec;
    };
    mono["H_T_decreasing"] = monotone("H_T");
    mono["dist_Hminus1_T_decreasing"] = monotone("dist_Hminus1_T");
    mono["pairing_rms_decreasing"] = monotone("pairing_rms");
    std::ofstream js(opt.out_dir + "/sweep_summary.json", std::ios::binary);
    js << mono.dump(2) << "\n";
    manifest.add_output("sweep_summary.json");
    manifest.finalize(true);
    std::printf("sweep: %zu runs -> %s/sweep.csv\n", eps_values.size(), opt.out_dir.c_str());
    return 0;
}

int cmd_verify(const std::string& out_dir, bool quick) {
    const auto results = qn::run_acceptance_checks(quick);
    json report = json::array();
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] %-48s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        report.push_back({{"test", r.name},
                          {"status", r.pass ? "pass" : "fail"},
                          {"margin", r.margin},
                          {"detail", r.detail}});
        if (!r.pass) ++failures;
    }
    const qn::SemiAxisVariants kv = qn::semi_axis_variants_report();
    report.push_back({{"test", "semi-axis condition variants (open question)"},
                      {"status", "info"},
                      {"margin", 0.0},
                      {"detail", qn::checks_detail::fmt(
                                     "implemented-variant residual %.2e, printed-variant "
                                     "residual %.2e",
                                     kv.residual_implemented, kv.residual_printed)}});
    std::printf("[info] semi-axis condition variants: implemented residual %.2e, alternative %.2e\n",
                kv.residual_implemented, kv.residual_printed);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        std::ofstream f(out_dir + "/verify_report.json", std::ios::binary);
        f << report.dump(2) << "\n";
        std::printf("report -> %s/verify_report.json\n", out_dir.c_str());
    }
    return failures == 0 ? 0 : 1;
}

int cmd_plot(const std::string& csv_path, const std::string& out_dir,
             std::string kind) {
    const qn::DiagnosticSeries s = qn::DiagnosticSeries::load(csv_path);
    if (s.rows.empty()) throw qn::config_error("plot: CSV has no data rows");
    ensure_dir(out_dir);
    if (kind == "auto") kind = (s.column_index("eps") >= 0) ? "sweep" : "energy";

    if (kind == "sweep") {
        if (s.column_index("eps") < 0 || s.column_index("H_T") < 0)
            throw qn::config_error("plot: sweep CSV needs columns eps and H_T");
        qn::PlotSpec spec;
        spec.title = "modulated energy vs epsilon";
        spec.xlabel = "epsilon";
        spec.ylabel = "H(T)";
        spec.logx = spec.logy = true;
        qn::PlotSeries ps{"H(T)", s.column("eps"), s.column("H_T")};
        qn::write_svg_plot(out_dir + "/sweep_H.svg", spec, {ps});
        if (s.column_index("dist_Hminus1_T") >= 0) {
            qn::PlotSpec d = spec;
            d.title = "H^-1 density distance vs epsilon";
            d.ylabel = "dist";
            qn::write_svg_plot(out_dir + "/sweep_dist.svg", d,
                               {{"dist_Hminus1(T)", s.column("eps"),
                                 s.column("dist_Hminus1_T")}});
        }
        std::printf("plot: wrote sweep SVGs to %s\n", out_dir.c_str());
        return 0;
    }
    if (kind != "energy") throw qn::config_error("plot: unknown kind '" + kind + "'");
    if (s.column_index("t") < 0) throw qn::config_error("plot: energy CSV needs column t");
    const auto t = s.column("t");
    int made = 0;
    for (const auto& col : s.columns) {
        if (col == "t" || col == "charge") continue;
        if (col.rfind("momentum", 0) == 0 || col.rfind("pairing", 0) == 0) continue;
        qn::PlotSpec spec;
        spec.title = col + " vs t";
        spec.xlabel = "t";
        spec.ylabel = col;
        qn::write_svg_plot(out_dir + "/" + col + ".svg", spec, {{col, t, s.column(col)}});
        ++made;
    }
    std::printf("plot: wrote %d SVGs to %s\n", made, out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-neutral Vlasov-Poisson laboratory"};
    app.require_subcommand(1);

    CommonOpts opt;
    bool quick = false;
    std::string csv_path, plot_kind = "auto";

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", opt.config_path, "config file path")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "seed override")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--jobs", opt.jobs, "worker count");
    };

    CLI::App* eqc = app.add_subcommand("equilibrium", "solve and dump the equilibrium");
    add_common(eqc, true);
    CLI::App* simc = app.add_subcommand("simulate", "run one kinetic simulation");
    add_common(simc, true);
    CLI::App* swc = app.add_subcommand("sweep", "run an epsilon sweep");
    add_common(swc, true);
    swc->add_option("--eps", opt.eps_list, "comma-separated epsilon list")->required();
    CLI::App* vc = app.add_subcommand("verify", "run the verification suite");
    vc->add_option("--out", opt.out_dir, "output directory for the JSON report");
    vc->add_flag("--quick", quick, "skip the long simulation criteria");
    CLI::App* pc = app.add_subcommand("plot", "render CSV output as SVG");
    pc->add_option("--csv", csv_path, "input CSV")->required();
    pc->add_option("--out", opt.out_dir, "output directory");
    pc->add_option("--kind", plot_kind, "energy | sweep | auto");

    try {
        app.parse(argc, argv);
        if (eqc->parsed()) return cmd_equilibrium(opt);
        if (simc->parsed()) return cmd_simulate(opt);
        if (swc->parsed()) return cmd_sweep(opt);
        if (vc->parsed()) return cmd_verify(vc->count("--out") ? opt.out_dir : "", quick);
        if (pc->parsed()) return cmd_plot(csv_path, opt.out_dir, plot_kind);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const qn::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const qn::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
