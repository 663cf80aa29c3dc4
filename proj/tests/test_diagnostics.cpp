#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/integrator.hpp"
#include "chemoflow/weak_form.hpp"
#include "support.hpp"

using namespace chemoflow;
using testing_support::sample;

namespace {

constexpr double kPi = std::numbers::pi;

RealField gaussian(const GridPtr& g, double a, double sigma, double x0 = 0.0, double y0 = 0.0) {
    RealField f(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto x = g->centered_position(i);
        const double dx = x[0] - x0, dy = x[1] - y0;
        f.values[i] = a * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
    return f;
}

std::vector<std::pair<double, double>> power_series(double a, double exponent, double t1, int count) {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i <= count; ++i) {
        const double t = t1 * i / count;
        s.emplace_back(t, a * std::pow(1.0 + t, exponent));
    }
    return s;
}

}  // namespace

TEST(LpNorm, ClosedForms) {
    const auto g = make_grid(2, 32, 2.0);
    EXPECT_NEAR(lp_norm(RealField(g, 1.0), 1.0), 4.0, 1e-14);
    EXPECT_NEAR(lp_norm(RealField(g, -1.0), 3.0), std::cbrt(4.0), 1e-14);

    RealField spike(g);
    spike.values[77] = -3.5;
    EXPECT_EQ(lp_norm(spike, kInf), 3.5);
    const double h = g->spacing();
    EXPECT_NEAR(lp_norm(spike, 2.0), 3.5 * h, 1e-15);

    const auto wide = make_grid(2, 128, 20.0);
    const double a = 0.7, sigma = 1.3;
    EXPECT_NEAR(lp_norm(gaussian(wide, a, sigma), 2.0), a * sigma * std::sqrt(kPi), 1e-12);
    EXPECT_NEAR(lp_norm(gaussian(wide, a, sigma), 1.0), a * 2.0 * kPi * sigma * sigma, 1e-12);

    EXPECT_THROW(lp_norm(spike, 0.5), ConfigError);
}

TEST(Entropy, ZeroAndUniform) {
    const auto g = make_grid(2, 16, 5.0);
    State s = make_rest_state(g);
    auto e = entropy_functional(s);
    EXPECT_EQ(e.entropy, 0.0);
    EXPECT_EQ(e.dissipation, 0.0);
    s.n = RealField(g, 1.0);
    e = entropy_functional(s);
    EXPECT_EQ(e.entropy, 0.0);
    EXPECT_EQ(e.dissipation, 0.0);
}

TEST(Entropy, GaussianDensityClosedForm) {
    // n = A exp(-r^2/(2 sigma^2)) with A < 1: int n|ln n| = M (1 - ln A), int |grad n|^2/n = 2M/sigma^2.
    const auto g = make_grid(2, 128, 20.0);
    const double a = 0.3, sigma = 1.0;
    State s = make_rest_state(g);
    s.n = gaussian(g, a, sigma);
    const double mass = 2.0 * kPi * sigma * sigma * a;
    const auto e = entropy_functional(s);
    EXPECT_NEAR(e.entropy, mass * (1.0 - std::log(a)), 1e-5);
    EXPECT_NEAR(e.dissipation, 2.0 * mass / (sigma * sigma), 1e-5);
}

TEST(Entropy, SignalAndVelocityTerms) {
    // c = B sin x on [0, 2pi)^2: ||grad c||^2 = ||lap c||^2 = 2 pi^2 B^2.
    const auto g = make_grid(2, 32, 2.0 * kPi);
    const double b = 0.4, amp = 0.25;
    State s = make_rest_state(g);
    s.c = sample(g, [&](double x, double, double) { return b * std::sin(x); });
    s.u[0] = sample(g, [&](double, double y, double) { return amp * std::cos(2.0 * y); });
    const auto e = entropy_functional(s);
    const double u2 = amp * amp * 2.0 * kPi * kPi, grad_u2 = 4.0 * u2;
    EXPECT_NEAR(e.entropy, 2.0 * kPi * kPi * b * b + u2, 1e-12);
    EXPECT_NEAR(e.dissipation, 2.0 * kPi * kPi * b * b + grad_u2, 1e-12);
}

TEST(WeightedLp, ReductionsAndClosedForm) {
    const auto g = make_grid(2, 32, 3.0);
    State s = make_rest_state(g);
    s.n = testing_support::smooth_random(g, 5, 6.0, 1.0, 0.3);
    EXPECT_NEAR(weighted_lp_functional(s, 2.0, 3.0), std::pow(lp_norm(s.n, 2.0), 2.0), 1e-12);
    EXPECT_NEAR(weighted_lp_functional(s, 3.5, 3.0), std::pow(lp_norm(s.n, 3.5), 3.5), 1e-12);

    State z = make_rest_state(g);
    z.c = RealField(g, 0.7);
    EXPECT_EQ(weighted_lp_functional(z, 2.0, 1.0), 0.0);

    State k = make_rest_state(g);
    k.n = RealField(g, 0.5);
    k.c = RealField(g, 0.2);
    const double beta = std::sqrt(18.0);
    EXPECT_NEAR(weighted_lp_functional(k, 2.0, beta), 0.25 * std::exp(beta * beta * 0.04) * 9.0, 1e-12);

    k.c = RealField(g, 10.0);
    EXPECT_THROW(weighted_lp_functional(k, 2.0, beta), Error);
    EXPECT_THROW(weighted_lp_functional(k, 1.0, beta), ConfigError);
    EXPECT_THROW(weighted_lp_functional(k, 2.0, 0.0), ConfigError);
}

TEST(Serrin, Admissibility) {
    EXPECT_TRUE(serrin_admissible(2, {4.0, 4.0}));
    EXPECT_TRUE(serrin_admissible(3, {5.0, 5.0}));
    EXPECT_TRUE(serrin_admissible(3, {kInf, 2.0}));
    EXPECT_FALSE(serrin_admissible(3, {4.0, 3.0}));
    EXPECT_FALSE(serrin_admissible(2, {2.0, kInf}));
    try {
        require_serrin_admissible(3, {4.0, 3.0});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("scaling condition"), std::string::npos);
    }
}

TEST(Serrin, IntegrandAndTrapezoidalFold) {
    // grad c = (B cos x, 0): ||grad c||_4^4 = B^4 (3 pi / 4)(2 pi).
    const auto g = make_grid(2, 32, 2.0 * kPi);
    const double b = 0.6;
    State s = make_rest_state(g);
    s.c = sample(g, [&](double x, double, double) { return b * std::sin(x); });
    const auto p = make_model_params(1.0, ScalarLaw::constant(0.0), ScalarLaw::constant(0.0), make_zero_potential(g), b);
    const double rate = 1.5 * kPi * kPi * std::pow(b, 4);
    EXPECT_NEAR(serrin_integrand(s, p, {4.0, 4.0}), rate, 1e-12);

    DiagnosticsConfig dc;
    const auto schema = make_schema(dc, p, 2);
    std::vector<DiagnosticsRow> rows{compute_row(s, p, schema, nullptr, kInf)};
    for (int k = 1; k <= 5; ++k) {
        s.t = 0.1 * k;
        rows.push_back(compute_row(s, p, schema, &rows.back(), kInf));
    }
    for (const auto& r : rows) EXPECT_NEAR(r.serrin[0], rate * r.t, 1e-12);
}

TEST(FirstMoment, ZeroPointMassAndOffsetGaussian) {
    const auto g = make_grid(2, 64, 20.0);
    EXPECT_EQ(first_moment(make_rest_state(g)), 0.0);

    State pm = make_rest_state(g);
    const std::size_t centre = 32 * 64 + 32;  // row-major, last axis fastest
    ASSERT_EQ(g->centered_position(centre)[0], 0.0);
    ASSERT_EQ(g->centered_position(centre)[1], 0.0);
    pm.n.values[centre] = 1.0 / g->cell_volume();
    EXPECT_NEAR(first_moment(pm), 1.0, 1e-14);

    State s = make_rest_state(g);
    s.n = gaussian(g, 1.0, 1.0, 1.0, 0.5);
    // Independent midpoint quadrature on a finer mesh.
    const int m = 1000;
    const double h = 20.0 / m;
    double ref = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double x = -10.0 + (i + 0.5) * h, y = -10.0 + (j + 0.5) * h;
            const double dx = x - 1.0, dy = y - 0.5;
            ref += std::exp(-(dx * dx + dy * dy) / 2.0) * std::sqrt(1.0 + x * x + y * y);
        }
    ref *= h * h;
    EXPECT_NEAR(first_moment(s) / ref, 1.0, 1e-6);
}

TEST(DecayFit, RecoversExponents) {
    const auto a = decay_fit(power_series(1.0, -0.5, 40.0, 400), 4.0, 40.0, -0.5, "x");
    EXPECT_NEAR(a.exponent, -0.5, 1e-12);
    EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(a.deviation, 0.0, 1e-11);
    EXPECT_EQ(a.quantity, "x");

    const auto b = decay_fit(power_series(3.0, -0.75, 40.0, 400), 4.0, 40.0, -0.5);
    EXPECT_NEAR(b.exponent, -0.75, 1e-12);
    EXPECT_NEAR(b.deviation, 0.5, 1e-11);

    const auto c = decay_fit(power_series(3.0e-7, -0.75, 40.0, 400), 4.0, 40.0, -0.5);
    EXPECT_NEAR(c.exponent, b.exponent, 1e-12);
}

TEST(DecayFit, RejectsDegenerateWindows) {
    const auto s = power_series(1.0, -0.5, 10.0, 100);
    EXPECT_THROW(decay_fit(s, 5.0, 5.5, -0.5), Error);  // 6 samples
    EXPECT_THROW(decay_fit(s, 5.0, 5.0, -0.5), ConfigError);
    auto bad = s;
    bad[50].second = 0.0;
    EXPECT_THROW(decay_fit(bad, 1.0, 9.0, -0.5), Error);
}

TEST(WeakResidual, RestTrajectoryHasZeroResidual) {
    RunConfig cfg;
    cfg.grid = {2, 32, 10.0};
    cfg.chi = ScalarLaw::constant(1.0);
    cfg.f = ScalarLaw::linear(1.0);
    cfg.integrator.t_end = 1.0;
    cfg.diagnostics.snapshot_every = 1;
    const auto setup = build_setup(cfg);
    const auto traj = run_setup(setup, cfg);
    ASSERT_EQ(traj.status, RunStatus::completed);
    const auto fns = random_test_functions(*setup.grid, 1.0, 3, 7);
    for (const auto& r : weak_residual(traj, setup.params, fns)) EXPECT_EQ(r.max(), 0.0);

    auto late = fns.front();
    late.t_off = 2.0;
    EXPECT_THROW(weak_residual(traj, setup.params, {late}), ConfigError);
}

TEST(WeakResidual, HeatTrajectorySatisfiesWeakForm) {
    auto cfg = RunConfig{};
    cfg.grid = {2, 64, 20.0};
    cfg.n0 = {ProfileKind::gaussian, 1.0, std::numbers::sqrt2, {0.0, 0.0, 0.0}};
    cfg.integrator.t_end = 1.0;
    cfg.integrator.dt_max = 0.01;
    cfg.diagnostics.snapshot_every = 1;
    const auto setup = build_setup(cfg);
    RunOptions opt;
    opt.fixed_dt = 0.01;
    const auto traj = run_setup(setup, cfg, opt);
    ASSERT_EQ(traj.status, RunStatus::completed);
    for (const auto& r : weak_residual(traj, setup.params, random_test_functions(*setup.grid, 1.0, 4, 3)))
        EXPECT_LE(r.n, 1e-4);
}
