#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "chemoflow/galerkin.hpp"
#include "chemoflow/verify.hpp"
#include "support.hpp"

using namespace chemoflow;

namespace {

RunConfig small_coupled() {
    auto cfg = coupled_config(64, 20.0);
    cfg.integrator.t_end = 0.5;
    cfg.integrator.dt_init = 0.01;
    return cfg;
}

SweepPlan small_plan(std::vector<double> l, std::vector<double> eps) {
    SweepPlan plan;
    plan.base = small_coupled();
    plan.l_ladder = std::move(l);
    plan.eps_ladder = std::move(eps);
    return plan;
}

double grad_norm(const RealField& f) { return std::sqrt(spectral_sobolev_squared(to_spectral(f), 1)); }

}  // namespace

TEST(Regularized, InactiveRegularizationReproducesPlainRun) {
    const auto cfg = small_coupled();
    const auto plain = run(cfg);
    const auto reg = run_regularized(cfg, kInf, 0.0);
    ASSERT_EQ(plain.status, RunStatus::completed);
    ASSERT_EQ(reg.status, RunStatus::completed);
    EXPECT_EQ(plain.steps, reg.steps);
    EXPECT_LE(state_distance(plain.final_state(), reg.final_state(), ComparisonNorm::h1), 1e-10);
}

TEST(Regularized, RestStateStaysAtRest) {
    RunConfig cfg;
    cfg.grid = {2, 32, 10.0};
    cfg.chi = ScalarLaw::constant(1.0);
    cfg.f = ScalarLaw::linear(1.0);
    cfg.integrator.t_end = 0.2;
    const auto traj = run_regularized(cfg, 4.0, 0.3);
    ASSERT_EQ(traj.status, RunStatus::completed);
    const auto& s = traj.final_state();
    EXPECT_EQ(max_abs(s.n), 0.0);
    EXPECT_EQ(max_abs(s.c), 0.0);
    EXPECT_EQ(max_abs(s.u), 0.0);
}

TEST(Regularized, MollifiedDataDoesNotIncreaseGradient) {
    const chemoflow::Setup base = build_setup(small_coupled());
    for (double eps : {0.05, 0.2, 0.4, 1.0}) {
        const auto s = regularize_setup(base, 16.0, eps);
        EXPECT_LE(grad_norm(s.initial.c), grad_norm(base.initial.c));
        EXPECT_LE(grad_norm(s.initial.n), grad_norm(base.initial.n));
        EXPECT_NEAR(integral(s.initial.n), integral(base.initial.n), 1e-13);
    }
    EXPECT_THROW(regularize_setup(base, -1.0, 0.1), ConfigError);
}

TEST(Sweep, MollifierLadderConverges) {
    const auto rep = convergence_sweep(small_plan({kInf}, {0.4, 0.2, 0.1}), 1);
    ASSERT_TRUE(rep.complete) << rep.message;
    ASSERT_EQ(rep.entries.size(), 3u);
    EXPECT_GT(rep.entries[0].distance, rep.entries[1].distance);
    EXPECT_GT(rep.entries[1].distance, rep.entries[2].distance);
    for (const auto& e : rep.entries) {
        EXPECT_LE(e.mass_drift, 1e-12);
        EXPECT_LE(e.c_max_excess, 1e-12);
    }
    EXPECT_TRUE(rep.finest_not_worse_than_coarsest());
}

TEST(Sweep, ProjectorLadderIsMonotone) {
    const auto rep = convergence_sweep(small_plan({0.5, 2.0, 8.0, kInf}, {0.0}), 1);
    ASSERT_TRUE(rep.complete) << rep.message;
    ASSERT_EQ(rep.entries.size(), 4u);
    for (std::size_t i = 1; i < rep.entries.size(); ++i)
        EXPECT_LE(rep.entries[i].distance, rep.entries[i - 1].distance) << "l = " << rep.entries[i].l;
    EXPECT_LE(rep.entries.back().distance, 1e-10);
    for (const auto& e : rep.entries) {
        EXPECT_GE(e.projector.grad, 0.0);
        EXPECT_GE(e.projector.lap, 0.0);
    }
}

TEST(Sweep, InactivePointMatchesReference) {
    auto plan = small_plan({kInf}, {0.0});
    plan.norm = ComparisonNorm::h1;
    const auto rep = convergence_sweep(plan, 1);
    ASSERT_TRUE(rep.complete);
    ASSERT_NE(rep.find(kInf, 0.0), nullptr);
    EXPECT_LE(rep.find(kInf, 0.0)->distance, 1e-10);
}

TEST(Sweep, TrajectoryModeAndWorkerIndependence) {
    auto plan = small_plan({4.0, kInf}, {0.2, 0.0});
    plan.base.integrator.t_end = 0.2;
    plan.base.diagnostics.snapshot_every = 5;
    plan.mode = DistanceMode::trajectory;
    const auto serial = convergence_sweep(plan, 1);
    const auto parallel = convergence_sweep(plan, 2);
    ASSERT_TRUE(serial.complete);
    ASSERT_EQ(serial.entries.size(), parallel.entries.size());
    for (std::size_t i = 0; i < serial.entries.size(); ++i)
        EXPECT_EQ(serial.entries[i].distance, parallel.entries[i].distance);
    EXPECT_LE(serial.find(kInf, 0.0)->distance, 1e-10);
    EXPECT_GT(serial.find(4.0, 0.2)->distance, 0.0);
}

TEST(Sweep, PlanValidation) {
    EXPECT_THROW(validate(small_plan({}, {0.1})), ConfigError);
    EXPECT_THROW(validate(small_plan({4.0, 2.0}, {0.1})), ConfigError);
    EXPECT_THROW(validate(small_plan({4.0, 4.0}, {0.1})), ConfigError);
    EXPECT_THROW(validate(small_plan({0.0, 2.0}, {0.1})), ConfigError);
    EXPECT_THROW(validate(small_plan({4.0}, {0.1, 0.2})), ConfigError);
    EXPECT_THROW(validate(small_plan({4.0}, {-0.1})), ConfigError);
    auto traj = small_plan({4.0}, {0.1});
    traj.mode = DistanceMode::trajectory;
    EXPECT_THROW(validate(traj), ConfigError);
    EXPECT_NO_THROW(validate(small_plan({1.0, 4.0, kInf}, {0.4, 0.1, 0.0})));
}

TEST(Distance, StateAndTrajectory) {
    const auto g = make_grid(2, 32, 2.0 * std::numbers::pi);
    State a = make_rest_state(g), b = make_rest_state(g);
    b.c = testing_support::sample(g, [](double x, double, double) { return 0.5 * std::sin(2.0 * x); });
    // ||0.5 sin 2x||^2 = pi^2/2, and its gradient adds 4x that.
    EXPECT_NEAR(state_distance(a, b, ComparisonNorm::l2), std::sqrt(0.5) * std::numbers::pi, 1e-13);
    EXPECT_NEAR(state_distance(a, b, ComparisonNorm::h1), std::sqrt(2.5) * std::numbers::pi, 1e-13);

    Trajectory ta, tb;
    for (int i = 0; i <= 4; ++i) {
        a.t = b.t = 0.25 * i;
        ta.snapshots.push_back(a);
        tb.snapshots.push_back(b);
    }
    EXPECT_NEAR(trajectory_distance(ta, tb, ComparisonNorm::l2), std::sqrt(0.5) * std::numbers::pi, 1e-13);
    tb.snapshots.pop_back();
    EXPECT_THROW(trajectory_distance(ta, tb, ComparisonNorm::l2), Error);
}

TEST(Projector, BoundsHoldOnRandomFields) {
    const auto g = make_grid(2, 64, 2.0 * std::numbers::pi);
    const auto checks = projector_bound_check(g, {1.0, 16.0, 100.0}, 100, 2024);
    ASSERT_EQ(checks.size(), 3u);
    for (const auto& c : checks) {
        EXPECT_EQ(c.trials, 100);
        EXPECT_EQ(c.violations, 0) << "l = " << c.l;
        EXPECT_GE(c.min_grad_margin, 0.0);
        EXPECT_GE(c.min_lap_margin, 0.0);
        EXPECT_LE(c.max_idempotence_error, 1e-12);
    }
    EXPECT_THROW(projector_bound_check(g, {0.0}, 1), ConfigError);
    EXPECT_THROW(projector_bound_check(g, {4.0}, 0), ConfigError);
}

TEST(Projector, LevelBelowFirstModeIsTrivial) {
    const auto g = make_grid(2, 32, 20.0);  // first nonzero |k|^2 = (2 pi / 20)^2
    NormalSource rng(11);
    const auto v = random_solenoidal_field(g, rng);
    const double l = 0.5 * std::pow(2.0 * std::numbers::pi / 20.0, 2);
    EXPECT_LE(max_abs(project_pl(v, l)), 1e-15 * max_abs(v));  // only the (vanishing) mean survives
    const auto m = projector_margins(v, l);
    EXPECT_GT(m.grad, 0.0);
    EXPECT_GT(m.lap, 0.0);
}

TEST(Workers, EnvironmentOverride) {
    ::setenv("CHEMOFLOW_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3u);
    ::setenv("CHEMOFLOW_THREADS", "0", 1);
    EXPECT_GE(worker_count(), 1u);
    ::unsetenv("CHEMOFLOW_THREADS");
}
