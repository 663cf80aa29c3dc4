#pragma once

// Regularized (mollified + Galerkin-projected) runs, convergence ladders toward
// the unregularized solution, and checks of the projector bounds
//   ||grad P_l v|| <= sqrt(l) ||v||,   ||lap P_l v|| <= l ||v||.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/integrator.hpp"
#include "chemoflow/random.hpp"
#include "chemoflow/run_config.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

/// Worker count: CHEMOFLOW_THREADS if set and positive, otherwise all cores.
inline unsigned worker_count() {
    if (const char* env = std::getenv("CHEMOFLOW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Mollified and projected initial data: (n0 * eta, c0 * eta, P_l u0 * eta).
inline Setup regularize_setup(Setup s, double l, double eps) {
    validate(Regularization{l, eps});
    s.initial.n = mollify(s.initial.n, eps);
    s.initial.c = mollify(s.initial.c, eps);
    s.initial.u = project_pl(mollify(s.initial.u, eps), l);
    return s;
}

inline Trajectory run_regularized(const RunConfig& cfg, double l, double eps, RunOptions opt = {}) {
    opt.regularization = Regularization{l, eps};
    return run_setup(regularize_setup(build_setup(cfg), l, eps), cfg, opt);
}

enum class ComparisonNorm { l2, h1 };
enum class DistanceMode { terminal, trajectory };

struct SweepPlan {
    RunConfig base;
    std::vector<double> l_ladder;    // strictly increasing, positive (inf allowed)
    std::vector<double> eps_ladder;  // strictly decreasing, nonnegative
    ComparisonNorm norm = ComparisonNorm::l2;
    DistanceMode mode = DistanceMode::terminal;
};

inline void validate(const SweepPlan& plan) {
    if (plan.l_ladder.empty() || plan.eps_ladder.empty()) throw ConfigError("sweep ladders must be nonempty");
    for (std::size_t i = 0; i < plan.l_ladder.size(); ++i) {
        if (!(plan.l_ladder[i] > 0.0)) throw ConfigError("l ladder entries must be positive");
        if (i > 0 && !(plan.l_ladder[i] > plan.l_ladder[i - 1])) throw ConfigError("l ladder must be strictly increasing");
    }
    for (std::size_t i = 0; i < plan.eps_ladder.size(); ++i) {
        if (!(plan.eps_ladder[i] >= 0.0)) throw ConfigError("eps ladder entries must be nonnegative");
        if (i > 0 && !(plan.eps_ladder[i] < plan.eps_ladder[i - 1]))
            throw ConfigError("eps ladder must be strictly decreasing");
    }
    if (plan.mode == DistanceMode::trajectory && plan.base.diagnostics.snapshot_every <= 0)
        throw ConfigError("trajectory distance needs diagnostics.snapshot_every > 0");
}

/// Distance between two states: L2 of (n, c, u) differences, optionally plus the gradient part (H1).
inline double state_distance(const State& a, const State& b, ComparisonNorm norm) {
    double sq = 0.0;
    auto add = [&](const RealField& x, const RealField& y) {
        RealField diff = x;
        diff -= y;
        const auto D = to_spectral(diff);
        sq += spectral_l2_squared(D);
        if (norm == ComparisonNorm::h1) sq += spectral_sobolev_squared(D, 1);
    };
    add(a.n, b.n);
    add(a.c, b.c);
    for (std::size_t k = 0; k < a.u.components.size(); ++k) add(a.u[k], b.u[k]);
    return std::sqrt(sq);
}

/// L2-in-time distance over snapshots taken at identical times.
inline double trajectory_distance(const Trajectory& a, const Trajectory& b, ComparisonNorm norm) {
    if (a.snapshots.size() != b.snapshots.size()) throw Error("trajectory distance needs matching snapshot times");
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        if (std::abs(a.snapshots[i].t - b.snapshots[i].t) > 1e-12 * std::max(1.0, a.snapshots[i].t))
            throw Error("trajectory distance needs matching snapshot times");
        const double d = state_distance(a.snapshots[i], b.snapshots[i], norm);
        if (i > 0) acc += 0.5 * (a.snapshots[i].t - a.snapshots[i - 1].t) * (prev * prev + d * d);
        prev = d;
    }
    return std::sqrt(acc);
}

struct ProjectorMargins {
    double grad = 0.0;  // sqrt(l) ||v|| - ||grad P_l v||
    double lap = 0.0;   // l ||v|| - ||lap P_l v||
};

inline ProjectorMargins projector_margins(const VectorField& v, double l) {
    if (std::isinf(l)) return {kInf, kInf};
    auto V = to_spectral(v);
    double v2 = 0.0;
    for (const auto& c : V) v2 += spectral_l2_squared(c);
    project_pl_inplace(V, l);
    double g2 = 0.0, l2 = 0.0;
    for (const auto& c : V) {
        g2 += spectral_sobolev_squared(c, 1);
        l2 += spectral_sobolev_squared(c, 2);
    }
    const double vn = std::sqrt(v2);
    return {std::sqrt(l) * vn - std::sqrt(g2), l * vn - std::sqrt(l2)};
}

struct LadderEntry {
    double l = 0.0;
    double eps = 0.0;
    double distance = 0.0;
    RunStatus status = RunStatus::completed;
    double mass_drift = 0.0;          // relative, over the run
    double c_max_excess = 0.0;        // max_t ||c||_inf / ||c0^{l,eps}||_inf - 1
    double entropy_ratio = 0.0;       // max_t entropy_budget / entropy_budget(0)
    ProjectorMargins projector;       // on the terminal velocity
};

struct ConvergenceReport {
    std::vector<LadderEntry> entries;
    RunStatus reference_status = RunStatus::completed;
    bool complete = true;
    std::string message;

    [[nodiscard]] const LadderEntry* find(double l, double eps) const {
        for (const auto& e : entries)
            if (e.l == l && e.eps == eps) return &e;
        return nullptr;
    }
    /// Distance at (max l, min eps) <= distance at (min l, max eps).
    [[nodiscard]] bool finest_not_worse_than_coarsest() const {
        if (entries.empty()) return false;
        double lmin = kInf, lmax = 0.0, emin = kInf, emax = -1.0;
        for (const auto& e : entries) {
            lmin = std::min(lmin, e.l);
            lmax = std::max(lmax, e.l);
            emin = std::min(emin, e.eps);
            emax = std::max(emax, e.eps);
        }
        const auto* fine = find(lmax, emin);
        const auto* coarse = find(lmin, emax);
        return fine && coarse && fine->distance <= coarse->distance;
    }
};

namespace detail {

inline LadderEntry summarize_member(const Trajectory& member, const Trajectory& reference, double l, double eps,
                                    const SweepPlan& plan) {
    LadderEntry e;
    e.l = l;
    e.eps = eps;
    e.status = member.status;
    e.distance = plan.mode == DistanceMode::terminal
                     ? state_distance(member.final_state(), reference.final_state(), plan.norm)
                     : trajectory_distance(member, reference, plan.norm);
    const auto& r0 = member.rows.front();
    const double c0 = r0.lp_c.back();
    for (const auto& r : member.rows) {
        e.mass_drift = std::max(e.mass_drift, r0.mass != 0.0 ? std::abs(r.mass - r0.mass) / std::abs(r0.mass) : 0.0);
        if (c0 > 0.0) e.c_max_excess = std::max(e.c_max_excess, r.lp_c.back() / c0 - 1.0);
        if (r0.entropy_budget > 0.0) e.entropy_ratio = std::max(e.entropy_ratio, r.entropy_budget / r0.entropy_budget);
    }
    e.projector = projector_margins(member.final_state().u, l);
    return e;
}

}  // namespace detail

/// Runs the reference and every (l, eps) ladder point (Cartesian product),
/// members in parallel, and reports terminal distances to the reference.
inline ConvergenceReport convergence_sweep(const SweepPlan& plan, unsigned workers = worker_count()) {
    validate(plan);
    ConvergenceReport report;
    const Setup base = build_setup(plan.base);
    const Trajectory reference = run_setup(base, plan.base);
    report.reference_status = reference.status;
    if (reference.status != RunStatus::completed) {
        report.complete = false;
        report.message = "reference run failed: " + reference.message;
        return report;
    }

    std::vector<std::pair<double, double>> points;
    for (double l : plan.l_ladder)
        for (double eps : plan.eps_ladder) points.emplace_back(l, eps);

    auto member = [&](std::size_t i) {
        const auto [l, eps] = points[i];
        RunOptions opt;
        opt.regularization = Regularization{l, eps};
        const auto traj = run_setup(regularize_setup(base, l, eps), plan.base, opt);
        return detail::summarize_member(traj, reference, l, eps, plan);
    };

    std::vector<LadderEntry> results(points.size());
    const std::size_t batch = std::max(1u, workers);
    for (std::size_t start = 0; start < points.size(); start += batch) {
        std::vector<std::future<LadderEntry>> jobs;
        const std::size_t stop = std::min(points.size(), start + batch);
        for (std::size_t i = start; i < stop; ++i)
            jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred, member, i));
        for (std::size_t i = start; i < stop; ++i) results[i] = jobs[i - start].get();
    }
    for (auto& e : results) {
        if (e.status != RunStatus::completed && report.complete) {
            report.complete = false;
            report.message = "ladder member (l = " + std::to_string(e.l) + ", eps = " + std::to_string(e.eps) +
                             ") failed with status " + to_string(e.status);
        }
        report.entries.push_back(e);
        if (!report.complete) break;
    }
    return report;
}

struct ProjectorCheck {
    double l = 0.0;
    int trials = 0;
    int violations = 0;
    double min_grad_margin = kInf;  // relative to sqrt(l) ||v||
    double min_lap_margin = kInf;   // relative to l ||v||
    double max_idempotence_error = 0.0;
};

/// Random solenoidal fields against the projector bounds and idempotence.
inline std::vector<ProjectorCheck> projector_bound_check(const GridPtr& g, const std::vector<double>& l_list, int trials,
                                                         std::uint64_t seed = 7) {
    if (trials < 1) throw ConfigError("projector_bound_check needs at least one trial");
    NormalSource rng(seed);
    std::vector<ProjectorCheck> out;
    for (double l : l_list) {
        if (!(l > 0.0)) throw ConfigError("projector level l must be positive");
        ProjectorCheck chk;
        chk.l = l;
        chk.trials = trials;
        for (int t = 0; t < trials; ++t) {
            const auto v = random_solenoidal_field(g, rng);
            auto V = to_spectral(v);
            double v2 = 0.0;
            for (const auto& c : V) v2 += spectral_l2_squared(c);
            const double vn = std::sqrt(v2);
            project_pl_inplace(V, l);
            double g2 = 0.0, l2 = 0.0;
            for (const auto& c : V) {
                g2 += spectral_sobolev_squared(c, 1);
                l2 += spectral_sobolev_squared(c, 2);
            }
            auto again = V;
            project_pl_inplace(again, l);
            double idem = 0.0, scale = 0.0;
            for (std::size_t a = 0; a < V.size(); ++a)
                for (std::size_t i = 0; i < V[a].size(); ++i) {
                    idem = std::max(idem, std::abs(again[a].coeffs[i] - V[a].coeffs[i]));
                    scale = std::max(scale, std::abs(V[a].coeffs[i]));
                }
            const double idem_rel = scale > 0.0 ? idem / scale : idem;
            const double gm = (std::sqrt(l) * vn - std::sqrt(g2)) / (std::sqrt(l) * vn);
            const double lm = (l * vn - std::sqrt(l2)) / (l * vn);
            chk.min_grad_margin = std::min(chk.min_grad_margin, gm);
            chk.min_lap_margin = std::min(chk.min_lap_margin, lm);
            chk.max_idempotence_error = std::max(chk.max_idempotence_error, idem_rel);
            if (gm < -1e-12 || lm < -1e-12 || idem_rel > 1e-12) ++chk.violations;
        }
        out.push_back(chk);
    }
    return out;
}

}  // namespace chemoflow
