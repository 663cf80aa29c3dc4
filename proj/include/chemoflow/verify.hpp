#pragma once

// Canned verification cases. Each case runs one or more canonical experiments
// and reports one PASS/FAIL line per check. --quick variants shrink grids and
// horizons for smoke testing; thresholds stay the same.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/galerkin.hpp"
#include "chemoflow/integrator.hpp"
#include "chemoflow/run_config.hpp"
#include "chemoflow/weak_form.hpp"

namespace chemoflow {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CaseReport {
    std::string name;
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

namespace detail {

inline std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
inline std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}
inline std::string fmt(const char* f, double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

inline std::size_t p_index(const DiagnosticsSchema& sc, double p) {
    for (std::size_t i = 0; i < sc.p_list.size(); ++i)
        if (sc.p_list[i] == p) return i;
    throw ConfigError("diagnostics p_list lacks p = " + format_p(p));
}

inline std::size_t weighted_index(const DiagnosticsSchema& sc, double p) {
    for (std::size_t i = 0; i < sc.weighted_p.size(); ++i)
        if (sc.weighted_p[i] == p) return i;
    throw ConfigError("diagnostics p_list lacks p = " + format_p(p));
}

inline CheckResult status_check(const Trajectory& traj) {
    return {"run completed", traj.status == RunStatus::completed,
            std::string(to_string(traj.status)) + (traj.message.empty() ? "" : ": " + traj.message) + ", " +
                std::to_string(traj.steps) + " steps"};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Canonical experiments

/// Coupled 2D run: kappa = 1, chi = 1, f(c) = c, phi = 0, small centred n0,
/// slightly offset c0 with ||c0||_inf = 0.01.
inline RunConfig coupled_config(int points = 128, double length = 40.0) {
    RunConfig cfg;
    cfg.grid = {2, points, length};
    cfg.kappa = 1.0;
    cfg.chi = ScalarLaw::constant(1.0);
    cfg.f = ScalarLaw::linear(1.0);
    cfg.n0 = {ProfileKind::gaussian, 0.1, std::numbers::sqrt2, {0.0, 0.0, 0.0}};
    cfg.c0 = {ProfileKind::gaussian, 0.01, std::numbers::sqrt2, {1.0, 0.5, 0.0}};
    cfg.u0 = {VelocityKind::zero, 0.0};
    cfg.integrator.t_end = 10.0;
    cfg.integrator.dt_max = 0.01;
    cfg.diagnostics.p_list = {1.0, 2.0, 4.0};
    return cfg;
}

inline constexpr double kCoupledDt = 0.005;

/// The shared coupled run: fixed dt = 0.005 for 2000 steps (200 when quick).
inline std::pair<RunConfig, Trajectory> coupled_run(bool quick) {
    auto cfg = coupled_config(128);
    cfg.integrator.t_end = quick ? 1.0 : 10.0;
    RunOptions opt;
    opt.fixed_dt = kCoupledDt;
    auto traj = run(cfg, opt);
    return {cfg, std::move(traj)};
}

/// Heat-only configuration: chi = f = phi = 0, u0 = 0, Gaussian n0 (and optionally c0).
inline RunConfig heat_config(int points, double length, double t_end, bool with_c = false) {
    RunConfig cfg;
    cfg.grid = {2, points, length};
    cfg.n0 = {ProfileKind::gaussian, 1.0, std::numbers::sqrt2, {0.0, 0.0, 0.0}};
    if (with_c) cfg.c0 = {ProfileKind::gaussian, 0.5, 1.0, {0.5, -0.5, 0.0}};
    cfg.integrator.t_end = t_end;
    cfg.integrator.dt_max = 0.05;
    cfg.integrator.dt_init = 0.01;
    return cfg;
}

/// Periodized heat kernel applied to a centred Gaussian of amplitude a, variance s2.
inline RealField periodized_heat_solution(const GridPtr& g, double a, double s2, double t, int images = 2) {
    RealField out(g);
    const double var = s2 + 2.0 * t;
    const double amp = a * std::pow(s2 / var, 0.5 * g->dim);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto x = g->centered_position(i);
        double sum = 0.0;
        const int m2 = g->dim == 3 ? images : 0;
        for (int m0 = -images; m0 <= images; ++m0)
            for (int m1 = -images; m1 <= images; ++m1)
                for (int mz = -m2; mz <= m2; ++mz) {
                    const double dx = x[0] - m0 * g->length, dy = x[1] - m1 * g->length, dz = x[2] - mz * g->length;
                    sum += std::exp(-(dx * dx + dy * dy + (g->dim == 3 ? dz * dz : 0.0)) / (2.0 * var));
                }
        out.values[i] = amp * sum;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checks on a finished trajectory

inline CheckResult check_mass(const Trajectory& traj, double tol = 1e-12) {
    const double m0 = traj.rows.front().mass;
    double drift = 0.0;
    for (const auto& r : traj.rows) drift = std::max(drift, std::abs(r.mass - m0) / std::abs(m0));
    return {"relative mass drift <= 1e-12", drift <= tol, detail::fmt("max drift %.3e over %.0f rows", drift,
                                                                      static_cast<double>(traj.rows.size()))};
}

inline std::vector<CheckResult> check_max_principle(const Trajectory& traj) {
    const auto& sc = traj.schema;
    const double c0 = traj.rows.front().lp_c.back();
    const auto j2 = detail::p_index(sc, 2.0);
    const double c2_0 = traj.rows.front().lp_c[j2];
    double cmax = 0.0, worst_rise = 0.0;
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
        cmax = std::max(cmax, traj.rows[i].lp_c.back());
        if (i > 0) worst_rise = std::max(worst_rise, (traj.rows[i].lp_c[j2] - traj.rows[i - 1].lp_c[j2]) / c2_0);
    }
    return {{"max c <= ||c0||_inf (1 + 1e-8)", cmax <= c0 * (1.0 + 1e-8),
             detail::fmt("max c %.12g, ||c0||_inf %.12g", cmax, c0)},
            {"||c||_L2 non-increasing (1e-8 slack per step)", worst_rise <= 1e-8,
             detail::fmt("largest relative per-step rise %.3e", worst_rise)}};
}

inline std::vector<CheckResult> check_weighted_lp(const Trajectory& traj, const ModelParams& params,
                                                  const RealField& c0) {
    const auto cert = hypothesis_check(params, c0, 2.0);
    const auto j = detail::weighted_index(traj.schema, 2.0);
    const double beta = traj.schema.betas[j];
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.rows.size(); ++i) {
        if (traj.rows[i].t > traj.t_valid) break;
        const double prev = traj.rows[i - 1].weighted_lp[j];
        worst = std::max(worst, (traj.rows[i].weighted_lp[j] - prev) / prev);
    }
    return {{"hypothesis_check(p = 2) passes", cert.lyapunov_regime(),
             detail::fmt("C_chi ||c0|| = %.4g (<= %.4g), ||c0|| = %.4g", cert.C_chi * cert.c0_sup,
                         cert.chi_threshold, cert.c0_sup) +
                 detail::fmt(" (<= %.4g)", cert.beta_threshold)},
            {"beta = sqrt(18) C_chi", std::abs(beta - std::sqrt(18.0) * params.C_chi) <= 1e-14 * beta,
             detail::fmt("beta %.12g", beta)},
            {"int n^2 exp((beta c)^2) non-increasing (1e-6 relative per step)", worst <= 1e-6,
             detail::fmt("largest relative per-step change %.3e", worst)}};
}

inline std::vector<CheckResult> check_serrin(const Trajectory& traj) {
    std::vector<CheckResult> out;
    // Restrict to the validity window.
    std::vector<const DiagnosticsRow*> rows;
    for (const auto& r : traj.rows)
        if (r.t <= traj.t_valid) rows.push_back(&r);
    const auto& last = *rows.back();
    const double t_end = last.t, t_mid = 0.5 * t_end;
    const DiagnosticsRow* mid = rows.front();
    for (const auto* r : rows)
        if (std::abs(r->t - t_mid) < std::abs(mid->t - t_mid)) mid = r;
    for (std::size_t k = 0; k < traj.schema.serrin_pairs.size(); ++k) {
        const auto& sp = traj.schema.serrin_pairs[k];
        const std::string tag = "(" + detail::format_p(sp.r) + "," + detail::format_p(sp.s) + ")";
        const double a = last.serrin[k];
        out.push_back({"Serrin accumulator " + tag + " finite", std::isfinite(a), detail::fmt("value %.6e", a)});
        const double first = (mid->serrin[k] - rows.front()->serrin[k]) / (mid->t - rows.front()->t);
        const double second = (a - mid->serrin[k]) / (t_end - mid->t);
        out.push_back({"Serrin growth " + tag + ": late slope <= early slope", second <= first,
                       detail::fmt("early %.6e, late %.6e", first, second)});
    }
    bool rejected = false;
    std::string what = "accepted";
    try {
        require_serrin_admissible(3, {4.0, 3.0});
    } catch (const ConfigError& e) {
        rejected = true;
        what = e.what();
    }
    out.push_back({"inadmissible pair (4,3) in 3D rejected", rejected, what});
    return out;
}

inline CheckResult check_entropy(const Trajectory& traj) {
    const double e0 = traj.rows.front().entropy_budget;
    double peak = e0;
    for (const auto& r : traj.rows)
        if (r.t <= traj.t_valid) peak = std::max(peak, r.entropy_budget);
    const bool finite = std::isfinite(peak);
    // The budget may start negative (n|ln n| is not sign-definite in general); compare magnitudes then.
    const bool bounded = finite && (e0 > 0.0 ? peak <= 3.0 * e0 : std::abs(peak) <= 3.0 * std::abs(e0));
    return {"entropy + 1/2 int dissipation < 3x initial", bounded,
            detail::fmt("initial %.6g, peak %.6g, ratio %.4f", e0, peak, e0 != 0.0 ? peak / e0 : kInf)};
}

// ---------------------------------------------------------------------------
// Cases

inline CaseReport verify_mass(bool quick) {
    const auto [cfg, traj] = coupled_run(quick);
    return {"mass", {detail::status_check(traj), check_mass(traj)}};
}

inline CaseReport verify_max_principle(bool quick) {
    const auto [cfg, traj] = coupled_run(quick);
    CaseReport r{"max-principle", {detail::status_check(traj)}};
    for (auto& c : check_max_principle(traj)) r.checks.push_back(c);
    return r;
}

inline CaseReport verify_entropy(bool quick) {
    const auto [cfg, traj] = coupled_run(quick);
    return {"entropy", {detail::status_check(traj), check_entropy(traj)}};
}

inline CaseReport verify_weighted_lp(bool quick) {
    const auto [cfg, traj] = coupled_run(quick);
    const auto setup = build_setup(cfg);
    CaseReport r{"weighted-lp", {detail::status_check(traj)}};
    for (auto& c : check_weighted_lp(traj, setup.params, setup.initial.c)) r.checks.push_back(c);
    return r;
}

inline CaseReport verify_serrin_watchdog(bool quick) {
    const auto [cfg, traj] = coupled_run(quick);
    CaseReport r{"serrin-watchdog", {detail::status_check(traj)}};
    for (auto& c : check_serrin(traj)) r.checks.push_back(c);
    return r;
}

/// Taylor-Green vortex on [0, 2pi)^2: u = e^{-2t} u0 exactly since the advection term is a gradient.
inline std::pair<RunConfig, Trajectory> taylor_green_run(double dt, double t_end = 0.5) {
    RunConfig cfg;
    cfg.grid = {2, 32, 2.0 * std::numbers::pi};
    cfg.kappa = 1.0;
    cfg.u0 = {VelocityKind::taylor_green, 1.0};
    cfg.integrator.t_end = t_end;
    cfg.integrator.dt_min = std::min(dt, cfg.integrator.dt_min);
    cfg.integrator.dt_init = dt;
    cfg.integrator.dt_max = std::max(dt, cfg.integrator.dt_max);
    RunOptions opt;
    opt.fixed_dt = dt;
    auto traj = run(cfg, opt);
    return {cfg, std::move(traj)};
}

/// Taylor-Green flow advecting a passive scalar c0 = exp(cos x + sin y - 2) (chi = f = 0).
/// The scalar has no closed form; errors are taken against a dt/32 reference.
inline Setup passive_scalar_setup() {
    RunConfig cfg;
    cfg.grid = {2, 32, 2.0 * std::numbers::pi};
    cfg.u0 = {VelocityKind::taylor_green, 1.0};
    Setup s = build_setup(cfg);
    const double h = s.grid->spacing();
    for (std::size_t i = 0; i < s.grid->size(); ++i) {
        const auto idx = s.grid->unflatten(i);
        s.initial.c.values[i] = std::exp(std::cos(idx[0] * h) + std::sin(idx[1] * h) - 2.0);
    }
    s.params = make_model_params(1.0, ScalarLaw::constant(0.0), ScalarLaw::constant(0.0),
                                 make_zero_potential(s.grid), lp_norm(s.initial.c, kInf));
    return s;
}

inline double passive_scalar_error(double dt, const State& reference, double t_end) {
    RunConfig cfg;
    cfg.integrator.t_end = t_end;
    cfg.integrator.dt_min = std::min(dt, cfg.integrator.dt_min);
    cfg.integrator.dt_init = dt;
    cfg.integrator.dt_max = std::max(dt, cfg.integrator.dt_max);
    RunOptions opt;
    opt.fixed_dt = dt;
    const auto traj = run_setup(passive_scalar_setup(), cfg, opt);
    if (traj.status != RunStatus::completed) return kInf;
    RealField diff = traj.final_state().c;
    diff -= reference.c;
    return max_abs(diff);
}

inline CaseReport verify_taylor_green(bool quick) {
    CaseReport r{"taylor-green", {}};
    const double t_end = 0.5;
    const auto [cfg, traj] = taylor_green_run(1e-3, quick ? 0.1 : t_end);
    r.checks.push_back(detail::status_check(traj));
    const auto& fin = traj.final_state();
    const auto u0 = build_setup(cfg).initial.u;
    double err = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t i = 0; i < fin.u[a].size(); ++i)
            err = std::max(err, std::abs(fin.u[a].values[i] - std::exp(-2.0 * fin.t) * u0[a].values[i]));
    r.checks.push_back({"max |u - e^{-2t} u0| <= 1e-6", err <= 1e-6, detail::fmt("error %.3e at t = %.3g", err, fin.t)});

    const double dt = quick ? 0.04 : 0.02;
    const double te = quick ? 0.24 : t_end;
    RunConfig rc;
    rc.integrator.t_end = te;
    rc.integrator.dt_min = dt / 64.0;
    RunOptions opt;
    opt.fixed_dt = dt / 32.0;
    const auto ref = run_setup(passive_scalar_setup(), rc, opt);
    const double e1 = passive_scalar_error(dt, ref.final_state(), te);
    const double e2 = passive_scalar_error(dt / 2.0, ref.final_state(), te);
    const double ratio = e1 / e2;
    r.checks.push_back({"halving dt reduces error 4x +- 20%", ratio >= 3.2 && ratio <= 4.8,
                        detail::fmt("errors %.3e -> %.3e, ratio %.3f", e1, e2, ratio)});
    return r;
}

inline CaseReport verify_heat_oracle(bool quick) {
    CaseReport r{"heat-oracle", {}};
    const auto cfg = heat_config(quick ? 64 : 128, 40.0, quick ? 1.0 : 5.0);
    const auto traj = run(cfg);
    r.checks.push_back(detail::status_check(traj));
    const auto& fin = traj.final_state();
    const auto exact = periodized_heat_solution(fin.grid(), cfg.n0.amplitude, cfg.n0.width * cfg.n0.width, fin.t);
    RealField diff = fin.n;
    diff -= exact;
    const double rel = lp_norm(diff, 2.0) / lp_norm(exact, 2.0);
    r.checks.push_back({"relative L2 error vs periodized heat kernel <= 1e-6", rel <= 1e-6, detail::fmt("error %.3e", rel)});

    const auto j2 = detail::p_index(traj.schema, 2.0);
    std::vector<std::pair<double, double>> series;
    for (const auto& row : traj.rows) series.emplace_back(row.t, row.lp_n[j2]);
    const auto fit = decay_fit(series, 0.0, fin.t, -0.5, "lp_n_2");
    r.checks.push_back({"||n||_L2 decay exponent within 10% of -0.5", fit.deviation <= 0.10,
                        detail::fmt("exponent %.5f (%.0f samples)", fit.exponent, static_cast<double>(fit.samples))});
    return r;
}

/// Decay run on the larger box, integrated over the validity window.
inline std::pair<RunConfig, Trajectory> decay_run(bool quick) {
    auto cfg = quick ? coupled_config(128, 40.0) : coupled_config(256, 80.0);
    cfg.integrator.dt_max = 0.02;
    cfg.integrator.t_end = validity_horizon(cfg);
    auto traj = run(cfg);
    return {cfg, std::move(traj)};
}

inline std::vector<CheckResult> check_decay(const Trajectory& traj, const ModelParams& params, const RealField& c0) {
    std::vector<CheckResult> out;
    const auto cert = hypothesis_check(params, c0, 2.0);
    out.push_back({"decay hypotheses hold (p = 2, M_omega_phi = 0)",
                   cert.decay_regime() && cert.weighted_potential == 0.0,
                   detail::fmt("||c0|| = %.4g, M_omega_phi = %.3g", cert.c0_sup, cert.weighted_potential)});
    const auto j2 = detail::p_index(traj.schema, 2.0);
    const double t1 = std::min(traj.t_valid, traj.rows.back().t);
    const double t0 = 0.1 * t1;
    auto fit_col = [&](const char* name, auto get, double tol) {
        std::vector<std::pair<double, double>> series;
        for (const auto& row : traj.rows) series.emplace_back(row.t, get(row));
        const auto fit = decay_fit(series, t0, t1, -0.5, name);
        out.push_back({std::string(name) + " decay exponent within " + detail::fmt("%.0f", tol * 100) + "% of -0.5",
                       fit.deviation <= tol,
                       detail::fmt("exponent %.4f over [%.2f, %.2f]", fit.exponent, t0, t1)});
    };
    fit_col("||n||_L2", [&](const DiagnosticsRow& r) { return r.lp_n[j2]; }, 0.15);
    fit_col("||c||_L2", [&](const DiagnosticsRow& r) { return r.lp_c[j2]; }, 0.15);
    fit_col("||c||_Linf", [&](const DiagnosticsRow& r) { return r.lp_c.back(); }, 0.20);
    return out;
}

inline CaseReport verify_decay_2d(bool quick) {
    const auto [cfg, traj] = decay_run(quick);
    const auto setup = build_setup(cfg);
    CaseReport r{"decay-2d", {detail::status_check(traj)}};
    for (auto& c : check_decay(traj, setup.params, setup.initial.c)) r.checks.push_back(c);
    return r;
}

/// Short coupled run; the velocity is generated by the chemotactic forcing.
inline SweepPlan galerkin_plan(bool quick) {
    SweepPlan plan;
    plan.base = coupled_config(128, 40.0);
    plan.base.integrator.t_end = quick ? 0.5 : 2.0;
    plan.l_ladder = quick ? std::vector<double>{4.0, kInf} : std::vector<double>{4.0, 16.0, 64.0, kInf};
    plan.eps_ladder = quick ? std::vector<double>{0.4, 0.0} : std::vector<double>{0.4, 0.2, 0.1, 0.0};
    return plan;
}

inline std::vector<CheckResult> check_galerkin(const ConvergenceReport& rep, const std::vector<ProjectorCheck>& proj) {
    std::vector<CheckResult> out;
    out.push_back({"all ladder runs completed", rep.complete, rep.complete ? "ok" : rep.message});
    double fine = kInf, coarse = kInf;
    if (!rep.entries.empty()) {
        const auto lo = std::min_element(rep.entries.begin(), rep.entries.end(), [](auto& a, auto& b) {
            return a.l < b.l || (a.l == b.l && a.eps > b.eps);
        });
        const auto hi = std::max_element(rep.entries.begin(), rep.entries.end(), [](auto& a, auto& b) {
            return a.l < b.l || (a.l == b.l && a.eps > b.eps);
        });
        coarse = lo->distance;
        fine = hi->distance;
    }
    out.push_back({"finest terminal L2 distance <= coarsest", rep.finest_not_worse_than_coarsest(),
                   detail::fmt("finest %.3e, coarsest %.3e", fine, coarse)});
    int violations = 0, trials = 0;
    std::string margins;
    for (const auto& p : proj) {
        violations += p.violations;
        trials += p.trials;
        margins += detail::fmt(" l=%g: grad %.3g, lap %.3g;", p.l, p.min_grad_margin, p.min_lap_margin);
    }
    out.push_back({"projector bounds: 0 violations", violations == 0 && trials > 0,
                   std::to_string(violations) + " violations in " + std::to_string(trials) + " trials;" + margins});
    return out;
}

inline CaseReport verify_galerkin(bool quick) {
    const auto rep = convergence_sweep(galerkin_plan(quick));
    const auto grid = make_grid(2, quick ? 32 : 64, 2.0 * std::numbers::pi);
    const auto proj = projector_bound_check(grid, {1.0, 4.0, 16.0, 64.0}, quick ? 10 : 100, 2024);
    return {"galerkin", check_galerkin(rep, proj)};
}

/// Heat-only trajectory on [0, 1] with every step stored.
inline Trajectory weak_form_trajectory(int points, double dt) {
    auto cfg = heat_config(points, 20.0, 1.0, true);
    cfg.integrator.dt_min = std::min(dt, cfg.integrator.dt_min);
    cfg.integrator.dt_init = dt;
    cfg.diagnostics.snapshot_every = 1;
    RunOptions opt;
    opt.fixed_dt = dt;
    return run(cfg, opt);
}

inline CaseReport verify_weak_residual(bool quick) {
    CaseReport r{"weak-residual", {}};
    const int n_coarse = 64;
    const double dt = quick ? 0.02 : 0.01;
    const auto coarse = weak_form_trajectory(n_coarse, dt);
    const auto fine = weak_form_trajectory(2 * n_coarse, dt / 2.0);
    r.checks.push_back(detail::status_check(coarse));
    r.checks.push_back(detail::status_check(fine));
    if (coarse.status != RunStatus::completed || fine.status != RunStatus::completed) return r;
    const auto params = build_setup(heat_config(n_coarse, 20.0, 1.0, true)).params;
    const auto tfs = random_test_functions(*coarse.snapshots.front().grid(), 1.0, 5, 99);
    const auto rc = weak_residual(coarse, params, tfs);
    const auto rf = weak_residual(fine, params, tfs);
    double worst = 0.0, worst_shrink = kInf;
    for (std::size_t k = 0; k < tfs.size(); ++k) {
        worst = std::max({worst, rc[k].max(), rf[k].max()});
        for (auto [a, b] : {std::pair{rc[k].n, rf[k].n}, std::pair{rc[k].c, rf[k].c}})
            if (a > 0.0) worst_shrink = std::min(worst_shrink, b > 0.0 ? a / b : kInf);
    }
    r.checks.push_back({"normalized weak residuals <= 1e-4", worst <= 1e-4, detail::fmt("largest %.3e", worst)});
    r.checks.push_back({"residuals shrink >= 3x under dt, h halving", worst_shrink >= 3.0,
                        detail::fmt("smallest shrink factor %.3f", worst_shrink)});
    return r;
}

using CaseFn = CaseReport (*)(bool);

inline const std::vector<std::pair<std::string, CaseFn>>& verify_cases() {
    static const std::vector<std::pair<std::string, CaseFn>> cases{
        {"mass", verify_mass},
        {"max-principle", verify_max_principle},
        {"entropy", verify_entropy},
        {"weighted-lp", verify_weighted_lp},
        {"taylor-green", verify_taylor_green},
        {"heat-oracle", verify_heat_oracle},
        {"decay-2d", verify_decay_2d},
        {"serrin-watchdog", verify_serrin_watchdog},
        {"galerkin", verify_galerkin},
        {"weak-residual", verify_weak_residual},
    };
    return cases;
}

inline CaseReport run_verify_case(const std::string& name, bool quick) {
    for (const auto& [n, fn] : verify_cases())
        if (n == name) return fn(quick);
    std::string known;
    for (const auto& c : verify_cases()) known += (known.empty() ? "" : ", ") + c.first;
    throw ConfigError("unknown verify case '" + name + "' (available: " + known + ")");
}

}  // namespace chemoflow
