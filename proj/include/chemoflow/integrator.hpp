#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/run_config.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

namespace detail {

// dst = S(dt) (a + w * b), coefficient-wise.
inline void heat_axpy(SpectralField& dst, const SpectralField& a, double w, const SpectralField& b,
                      const std::vector<double>& decay) {
    for (std::size_t i = 0; i < a.size(); ++i) dst.coeffs[i] = decay[i] * (a.coeffs[i] + w * b.coeffs[i]);
}

inline void check_positivity(const RealField& f, double tol_rel, const char* name, double t) {
    double mx = 0.0, mn = 0.0;
    for (double x : f.values) {
        if (!std::isfinite(x)) throw StepDiverged(std::string("non-finite ") + name + " after step to t = " + std::to_string(t));
        mx = std::max(mx, x);
        mn = std::min(mn, x);
    }
    if (mn < -tol_rel * mx)
        throw PositivityBreach(std::string("min ") + name + " = " + std::to_string(mn) + " below -tol_pos at t = " +
                               std::to_string(t));
}

}  // namespace detail

/// One exponential-integrator midpoint step (integrating-factor Heun):
///   s*  = S(dt) (s + dt N(s))
///   s+  = S(dt) (s + dt/2 N(s)) + dt/2 N(s*)
/// where S is the heat semigroup and N the non-diffusive tendency. The velocity
/// is re-projected afterwards.
inline SpectralState etd_rk2_step(const SpectralState& s, const ModelParams& p, double dt,
                                  const Regularization& reg = {}) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive and finite");
    const Grid& g = *s.n.grid;
    std::vector<double> decay(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) decay[i] = std::exp(-g.k_squared[i] * dt);

    const auto n0 = nonstiff_tendency(s, p, reg);
    SpectralState pred{s.t + dt, SpectralField(s.n.grid), SpectralField(s.n.grid),
                       SpectralVector(s.u.size(), SpectralField(s.n.grid))};
    detail::heat_axpy(pred.n, s.n, dt, n0.n, decay);
    detail::heat_axpy(pred.c, s.c, dt, n0.c, decay);
    for (std::size_t a = 0; a < s.u.size(); ++a) detail::heat_axpy(pred.u[a], s.u[a], dt, n0.u[a], decay);

    const auto n1 = nonstiff_tendency(pred, p, reg);
    SpectralState out = pred;
    auto corrector = [&](SpectralField& dst, const SpectralField& a, const SpectralField& b0, const SpectralField& b1) {
        for (std::size_t i = 0; i < a.size(); ++i)
            dst.coeffs[i] = decay[i] * (a.coeffs[i] + 0.5 * dt * b0.coeffs[i]) + 0.5 * dt * b1.coeffs[i];
    };
    corrector(out.n, s.n, n0.n, n1.n);
    corrector(out.c, s.c, n0.c, n1.c);
    for (std::size_t a = 0; a < s.u.size(); ++a) corrector(out.u[a], s.u[a], n0.u[a], n1.u[a]);
    project_pl_inplace(out.u, reg.l);
    return out;
}

/// Advances a real-space state by dt, checking finiteness and positivity.
/// tol_pos is relative to the field maximum.
inline State step(const State& s, const ModelParams& p, double dt, std::optional<Regularization> reg = std::nullopt,
                  double tol_pos = 1e-8) {
    const auto next = etd_rk2_step(to_spectral(s), p, dt, reg.value_or(Regularization{}));
    State out = to_real(next);
    detail::check_positivity(out.n, tol_pos, "n", out.t);
    detail::check_positivity(out.c, tol_pos, "c", out.t);
    for (const auto& comp : out.u.components)
        for (double x : comp.values)
            if (!std::isfinite(x)) throw StepDiverged("non-finite velocity after step to t = " + std::to_string(out.t));
    return out;
}

/// CFL-type step: cfl_safety * h / max(max|u|, max|chi(c) grad c|, max|grad phi|),
/// clamped to [dt_min, dt_max]. Vanishing fields give dt_max.
inline double adapt_dt(const State& s, const ModelParams& p, const IntegratorConfig& cfg) {
    const double h = s.grid()->spacing();
    double speed = max_abs(s.u);
    {
        const auto grad_c = to_real(spectral_gradient(to_spectral(s.c)));
        const auto chi = eval_law(p.chi, s.c);
        for (std::size_t i = 0; i < chi.size(); ++i) {
            double g2 = 0.0;
            for (const auto& comp : grad_c.components) g2 += comp.values[i] * comp.values[i];
            speed = std::max(speed, std::abs(chi.values[i]) * std::sqrt(g2));
        }
    }
    if (!p.potential.grad_phi.components.empty()) {
        for (std::size_t i = 0; i < s.n.size(); ++i) {
            double g2 = 0.0;
            for (const auto& comp : p.potential.grad_phi.components) g2 += comp.values[i] * comp.values[i];
            speed = std::max(speed, std::sqrt(g2));
        }
    }
    const double dt = speed > 0.0 ? cfg.cfl_safety * h / speed : std::numeric_limits<double>::infinity();
    return std::clamp(dt, cfg.dt_min, cfg.dt_max);
}

enum class RunStatus { completed, diverged, positivity_breach, validity_stop };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::diverged: return "diverged";
        case RunStatus::positivity_breach: return "positivity_breach";
        case RunStatus::validity_stop: return "validity_stop";
    }
    return "?";
}

struct Trajectory {
    DiagnosticsSchema schema;
    std::vector<DiagnosticsRow> rows;
    std::vector<State> snapshots;
    RunStatus status = RunStatus::completed;
    std::string message;
    double t_valid = std::numeric_limits<double>::infinity();
    std::size_t steps = 0;

    [[nodiscard]] std::vector<double> snapshot_times() const {
        std::vector<double> t;
        for (const auto& s : snapshots) t.push_back(s.t);
        return t;
    }
    [[nodiscard]] const State& final_state() const { return snapshots.back(); }
};

struct RunOptions {
    std::optional<Regularization> regularization;
    /// Called after every accepted step (and once for the initial state).
    std::function<void(const State&)> on_step;
    /// Fixed step size; overrides adaptive control when set.
    std::optional<double> fixed_dt;
};

/// Integrates from a prepared setup to cfg.integrator.t_end.
inline Trajectory run_setup(const Setup& setup, const RunConfig& cfg, const RunOptions& opt = {}) {
    const auto& ic = cfg.integrator;
    validate(ic);
    const Regularization reg = opt.regularization.value_or(Regularization{});
    validate(reg);

    Trajectory traj;
    traj.schema = make_schema(cfg.diagnostics, setup.params, setup.grid->dim);
    traj.t_valid = setup.t_valid;

    State current = setup.initial;
    SpectralState spectral = to_spectral(current);
    traj.rows.push_back(compute_row(current, setup.params, traj.schema, nullptr, setup.t_valid));
    traj.snapshots.push_back(current);
    if (opt.on_step) opt.on_step(current);

    const int cadence = cfg.diagnostics.snapshot_every;
    const double t_end = ic.t_end;
    const double t_tol = 1e-12 * std::max(1.0, t_end);

    while (current.t < t_end - t_tol) {
        double dt = opt.fixed_dt ? *opt.fixed_dt : adapt_dt(current, setup.params, ic);
        if (current.t + dt > t_end - t_tol) dt = t_end - current.t;

        State next;
        SpectralState next_spectral;
        try {
            next_spectral = etd_rk2_step(spectral, setup.params, dt, reg);
            next = to_real(next_spectral);
            detail::check_positivity(next.n, ic.tol_pos, "n", next.t);
            detail::check_positivity(next.c, ic.tol_pos, "c", next.t);
            for (const auto& comp : next.u.components)
                for (double x : comp.values)
                    if (!std::isfinite(x)) throw StepDiverged("non-finite velocity at t = " + std::to_string(next.t));
        } catch (const StepDiverged& e) {
            traj.status = RunStatus::diverged;
            traj.message = e.what();
            break;
        } catch (const PositivityBreach& e) {
            traj.status = RunStatus::positivity_breach;
            traj.message = e.what();
            break;
        }
        if (std::abs(next.t - t_end) <= t_tol) {
            next.t = t_end;
            next_spectral.t = t_end;
        }
        current = std::move(next);
        spectral = std::move(next_spectral);
        ++traj.steps;

        traj.rows.push_back(compute_row(current, setup.params, traj.schema, &traj.rows.back(), setup.t_valid));
        if (opt.on_step) opt.on_step(current);
        if (cadence > 0 && traj.steps % static_cast<std::size_t>(cadence) == 0) traj.snapshots.push_back(current);

        if (cfg.validity_action == ValidityAction::stop && current.t > setup.t_valid) {
            traj.status = RunStatus::validity_stop;
            traj.message = "validity window exceeded at t = " + std::to_string(current.t);
            break;
        }
    }
    if (traj.snapshots.back().t < current.t) traj.snapshots.push_back(current);
    return traj;
}

inline Trajectory run(const RunConfig& cfg, const RunOptions& opt = {}) { return run_setup(build_setup(cfg), cfg, opt); }

}  // namespace chemoflow
