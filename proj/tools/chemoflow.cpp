// chemoflow: command-line front end.
//
//   chemoflow run --config PATH --out DIR
//   chemoflow verify --case NAME [--quick]
//   chemoflow sweep --plan PATH --out DIR
//   chemoflow fit-decay --csv PATH --column NAME --t0 T0 --t1 T1 --reference R [--tolerance TOL]
//
// Exit codes: 0 pass, 1 check failure, 2 usage or configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "chemoflow/config.hpp"
#include "chemoflow/galerkin.hpp"
#include "chemoflow/io.hpp"
#include "chemoflow/verify.hpp"

namespace {

using namespace chemoflow;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const auto cfg = parse_config(config_path);
    const auto setup = build_setup(cfg);
    const auto cert = hypothesis_check(setup.params, setup.initial.c, 2.0);
    std::printf("grid d=%d N=%d L=%g, t_end=%g, T_valid=%g\n", cfg.grid.dim, cfg.grid.points, cfg.grid.length,
                cfg.integrator.t_end, setup.t_valid);
    std::printf("hypothesis (p=2): C_chi=%.6g beta=%.6g lyapunov=%s decay=%s M_omega_phi=%.6g\n", cert.C_chi, cert.beta,
                cert.lyapunov_regime() ? "yes" : "no", cert.decay_regime() ? "yes" : "no", cert.weighted_potential);
    if (cfg.integrator.t_end > setup.t_valid && cfg.validity_action == ValidityAction::warn)
        std::fprintf(stderr, "warning: t_end exceeds the validity window T_valid = %g\n", setup.t_valid);

    const auto traj = run_setup(setup, cfg);
    const auto dir = std::filesystem::path(out_dir);
    write_diagnostics_csv((dir / "diagnostics.csv").string(), traj);
    write_checkpoint((dir / "final.chk").string(), traj.final_state());
    std::printf("status %s after %zu steps, t = %.6g%s%s\n", to_string(traj.status), traj.steps,
                traj.final_state().t, traj.message.empty() ? "" : ": ", traj.message.c_str());
    std::printf("wrote %s and %s\n", (dir / "diagnostics.csv").c_str(), (dir / "final.chk").c_str());
    return traj.status == RunStatus::completed ? kPass : kFail;
}

int cmd_verify(const std::string& name, bool quick) {
    const auto report = run_verify_case(name, quick);
    for (const auto& c : report.checks)
        std::printf("%s %s: %s -- %s\n", c.pass ? "PASS" : "FAIL", report.name.c_str(), c.name.c_str(),
                    c.detail.c_str());
    return report.passed() ? kPass : kFail;
}

int cmd_sweep(const std::string& plan_path, const std::string& out_dir) {
    const auto plan = parse_sweep_plan(plan_path);
    const auto rep = convergence_sweep(plan);
    const auto dir = std::filesystem::path(out_dir);
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "sweep.csv").string();
    std::ofstream out(csv);
    if (!out) throw IoError("cannot open '" + csv + "' for writing");
    out << "l,eps,distance,status,mass_drift,c_max_excess,entropy_ratio,grad_margin,lap_margin\n";
    char buf[512];
    for (const auto& e : rep.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.l, e.eps, e.distance,
                      to_string(e.status), e.mass_drift, e.c_max_excess, e.entropy_ratio, e.projector.grad,
                      e.projector.lap);
        out << buf;
    }
    if (!out) throw IoError("write to '" + csv + "' failed");

    std::printf("%-10s %-8s %-14s %-12s %s\n", "l", "eps", "distance", "mass_drift", "status");
    for (const auto& e : rep.entries)
        std::printf("%-10g %-8g %-14.6e %-12.3e %s\n", e.l, e.eps, e.distance, e.mass_drift, to_string(e.status));
    const bool monotone = rep.finest_not_worse_than_coarsest();
    if (!rep.complete) std::printf("FAIL sweep aborted: %s\n", rep.message.c_str());
    std::printf("%s finest distance <= coarsest distance\n", monotone ? "PASS" : "FAIL");
    std::printf("wrote %s\n", csv.c_str());
    return rep.complete && monotone ? kPass : kFail;
}

int cmd_fit_decay(const std::string& csv, const std::string& column, double t0, double t1, double reference,
                  double tolerance) {
    const auto table = read_csv(csv);
    const auto t = table.column("t");
    const auto v = table.column(column);
    std::vector<std::pair<double, double>> series;
    for (std::size_t i = 0; i < t.size(); ++i) series.emplace_back(t[i], v[i]);
    const auto fit = decay_fit(series, t0, t1, reference, column);
    std::printf("%s: exponent %.6f over [%g, %g] (%zu samples, R^2 %.6f); reference %g, deviation %.2f%%\n",
                column.c_str(), fit.exponent, t0, t1, fit.samples, fit.r_squared, reference, 100.0 * fit.deviation);
    const bool pass = fit.deviation <= tolerance;
    std::printf("%s deviation <= %.2f%%\n", pass ? "PASS" : "FAIL", 100.0 * tolerance);
    return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemoflow: pseudo-spectral chemotaxis-fluid solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", case_name, plan_path, csv_path, column;
    bool quick = false;
    double t0 = 0.0, t1 = 0.0, reference = 0.0, tolerance = 0.1;

    auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
    run_cmd->add_option("--config", config_path, "configuration file")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* verify_cmd = app.add_subcommand("verify", "run a canned verification case");
    verify_cmd->add_option("--case", case_name, "case name")->required();
    verify_cmd->add_flag("--quick", quick, "smaller grids and horizons");

    auto* sweep_cmd = app.add_subcommand("sweep", "regularization convergence sweep");
    sweep_cmd->add_option("--plan", plan_path, "sweep plan file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* fit_cmd = app.add_subcommand("fit-decay", "fit a power-law decay exponent to a CSV column");
    fit_cmd->add_option("--csv", csv_path, "diagnostics CSV")->required();
    fit_cmd->add_option("--column", column, "column name")->required();
    fit_cmd->add_option("--t0", t0, "window start")->required();
    fit_cmd->add_option("--t1", t1, "window end")->required();
    fit_cmd->add_option("--reference", reference, "expected exponent")->required();
    fit_cmd->add_option("--tolerance", tolerance, "allowed relative deviation (default 0.1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        require_little_endian();
        if (*run_cmd) return cmd_run(config_path, out_dir);
        if (*verify_cmd) return cmd_verify(case_name, quick);
        if (*sweep_cmd) return cmd_sweep(plan_path, out_dir);
        if (*fit_cmd) return cmd_fit_decay(csv_path, column, t0, t1, reference, tolerance);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFail;
    }
    return kUsage;
}
