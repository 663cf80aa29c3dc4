#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "chemoflow/spectral.hpp"
#include "support.hpp"

using namespace chemoflow;
using testing_support::max_diff;
using testing_support::sample;
using testing_support::smooth_random;

namespace {

constexpr double kPi = std::numbers::pi;

/// Single Fourier mode (m0, m1) with vector amplitude (a0, a1) in 2D: a * cos(k.x).
VectorField cos_mode(const GridPtr& g, int m0, int m1, double a0, double a1) {
    const double k = g->k_min();
    VectorField v(g);
    v[0] = sample(g, [&](double x, double y, double) { return a0 * std::cos(k * (m0 * x + m1 * y)); });
    v[1] = sample(g, [&](double x, double y, double) { return a1 * std::cos(k * (m0 * x + m1 * y)); });
    return v;
}

}  // namespace

TEST(Grid, IntegerWavenumbersOnTwoPiBox) {
    const auto g = make_grid(2, 8, 2.0 * kPi);
    ASSERT_EQ(g->wavenumbers.size(), 8u);
    std::vector<double> k(g->wavenumbers);
    std::sort(k.begin(), k.end());
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(k[static_cast<std::size_t>(i)], -3 + i, 1e-14);
    EXPECT_EQ(g->size(), 64u);
}

TEST(Grid, SmallestNonzeroWavenumber) {
    const auto g = make_grid(3, 16, 10.0);
    EXPECT_NEAR(g->k_min(), 0.6283185307179586, 1e-15);
    EXPECT_EQ(g->size(), 4096u);
}

TEST(Grid, RejectsInvalidShapes) {
    EXPECT_THROW(make_grid(2, 7, 1.0), ConfigError);
    EXPECT_THROW(make_grid(2, 6, 1.0), ConfigError);
    EXPECT_THROW(make_grid(4, 8, 1.0), ConfigError);
    EXPECT_THROW(make_grid(2, 8, 0.0), ConfigError);
    EXPECT_THROW(make_grid(2, 8, -1.0), ConfigError);
}

TEST(Transform, ConstantHasOnlyMeanMode) {
    const auto g = make_grid(2, 16, 3.0);
    const auto F = to_spectral(RealField(g, 1.0));
    EXPECT_NEAR(F.coeffs[0].real(), 1.0, 1e-15);
    for (std::size_t i = 1; i < F.size(); ++i) EXPECT_LT(std::abs(F.coeffs[i]), 1e-15);
}

TEST(Transform, SineHasTwoModes) {
    const auto g = make_grid(2, 16, 3.0);
    const double L = g->length;
    const auto F = to_spectral(sample(g, [&](double x, double, double) { return std::sin(2.0 * kPi * x / L); }));
    int nonzero = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (std::abs(F.coeffs[i]) < 1e-13) continue;
        ++nonzero;
        const auto idx = g->unflatten(i);
        EXPECT_EQ(std::abs(g->modes[static_cast<std::size_t>(idx[0])]), 1);
        EXPECT_EQ(idx[1], 0);
        EXPECT_NEAR(std::abs(F.coeffs[i]), 0.5, 1e-14);
    }
    EXPECT_EQ(nonzero, 2);
}

TEST(Transform, RoundTripRandom) {
    for (int dim : {2, 3}) {
        const auto g = make_grid(dim, 16, 5.0);
        NormalSource rng(3);
        const auto f = white_noise(g, rng);
        const auto back = to_real(to_spectral(f));
        EXPECT_LE(max_diff(f, back), 1e-12 * max_abs(f));
    }
}

TEST(Transform, ParsevalWithBoxVolume) {
    const auto g = make_grid(2, 32, 4.0);
    const auto f = smooth_random(g, 5, 8.0);
    double direct = 0.0;
    for (double x : f.values) direct += x * x;
    direct *= g->cell_volume();
    EXPECT_NEAR(spectral_l2_squared(to_spectral(f)), direct, 1e-12 * direct);
}

TEST(Transform, RealDataIsHermitian) {
    const auto g = make_grid(2, 16, 1.0);
    const auto F = to_spectral(smooth_random(g, 9, 7.0));
    const int N = g->points;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const auto a = F.coeffs[static_cast<std::size_t>(i * N + j)];
            const auto b = F.coeffs[static_cast<std::size_t>(((N - i) % N) * N + (N - j) % N)];
            EXPECT_LT(std::abs(a - std::conj(b)), 1e-15);
        }
}

TEST(Operators, GradientOfConstantVanishes) {
    const auto g = make_grid(2, 16, 2.0);
    const auto grad = gradient(RealField(g, 3.5));
    EXPECT_EQ(max_abs(grad), 0.0);
}

TEST(Operators, LaplacianEigenfunction) {
    const auto g = make_grid(2, 32, 3.0);
    const double k = 2.0 * kPi / g->length;
    const auto f = sample(g, [&](double x, double, double) { return std::sin(k * x); });
    auto expected = f;
    expected *= -k * k;
    EXPECT_LE(max_diff(laplacian(f), expected), 1e-12);
}

TEST(Operators, DivergenceOfGradientIsLaplacian) {
    for (int dim : {2, 3}) {
        const auto g = make_grid(dim, dim == 2 ? 64 : 24, 7.0);
        const auto f = smooth_random(g, 11, g->points / 4.0);
        const auto lap = laplacian(f);
        EXPECT_LE(max_diff(divergence(gradient(f)), lap), 1e-10 * max_abs(lap));
    }
}

TEST(Dealias, KeepsLowModes) {
    const auto g = make_grid(2, 48, 2.0);
    NormalSource rng(1);
    auto F = to_spectral(white_noise(g, rng));
    band_limit_inplace(F, 15.0);  // every |m_j| <= 15 < 16
    const auto D = dealias(F);
    for (std::size_t i = 0; i < F.size(); ++i) EXPECT_EQ(D.coeffs[i], F.coeffs[i]);
}

TEST(Dealias, RemovesNyquist) {
    const auto g = make_grid(2, 16, 2.0);
    const auto f = sample(g, [&](double x, double, double) { return std::cos(kPi * x / g->spacing()); });
    const auto D = dealias(to_spectral(f));
    for (const auto& c : D.coeffs) EXPECT_EQ(std::abs(c), 0.0);
}

TEST(Dealias, Idempotent) {
    const auto g = make_grid(2, 32, 2.0);
    NormalSource rng(2);
    const auto once = dealias(to_spectral(white_noise(g, rng)));
    const auto twice = dealias(once);
    for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.coeffs[i], twice.coeffs[i]);
}

TEST(Leray, GradientModeRemoved) {
    const auto g = make_grid(2, 16, 3.0);
    const auto v = leray_project(cos_mode(g, 1, 0, 1.0, 0.0));
    EXPECT_LT(max_abs(v), 1e-15);
}

TEST(Leray, SolenoidalModeKept) {
    const auto g = make_grid(2, 16, 3.0);
    const auto v = cos_mode(g, 1, 0, 0.0, 1.0);
    EXPECT_LT(max_diff(leray_project(v), v), 1e-15);
}

TEST(Leray, RandomFieldBecomesDivergenceFreeAndIsIdempotent) {
    for (int dim : {2, 3}) {
        const auto g = make_grid(dim, 16, 4.0);
        NormalSource rng(17);
        VectorField v(g);
        for (auto& c : v.components) c = white_noise(g, rng);
        const auto p = leray_project(v);
        EXPECT_LE(max_divergence(p), 1e-10 * max_abs(v));
        EXPECT_LE(max_diff(leray_project(p), p), 1e-12 * max_abs(p));
    }
}

TEST(Semigroup, ZeroStepIsIdentity) {
    const auto g = make_grid(2, 16, 2.0);
    const auto F = to_spectral(smooth_random(g, 4, 6.0));
    const auto S = diffusion_semigroup(F, 0.0);
    for (std::size_t i = 0; i < F.size(); ++i) EXPECT_EQ(S.coeffs[i], F.coeffs[i]);
}

TEST(Semigroup, SingleModeDecay) {
    const auto g = make_grid(2, 16, 2.0 * kPi);
    const auto f = sample(g, [](double x, double, double) { return std::cos(x); });
    const auto out = to_real(diffusion_semigroup(to_spectral(f), 1.0));
    auto expected = f;
    expected *= 0.36787944117144233;
    EXPECT_LE(max_diff(out, expected), 1e-15);
}

TEST(Semigroup, CompositionLaw) {
    const auto g = make_grid(2, 32, 5.0);
    const auto F = to_spectral(smooth_random(g, 8, 10.0));
    const auto a = diffusion_semigroup(diffusion_semigroup(F, 0.7), 0.3);
    const auto b = diffusion_semigroup(F, 1.0);
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (std::abs(b.coeffs[i]) > 1e-300) {
            EXPECT_LE(std::abs(a.coeffs[i] - b.coeffs[i]), 1e-13 * std::abs(b.coeffs[i]));
        }
    }
}

TEST(Semigroup, ContractiveAndFixesMean) {
    const auto g = make_grid(2, 16, 2.0);
    NormalSource rng(6);
    const auto F = to_spectral(white_noise(g, rng));
    const auto S = diffusion_semigroup(F, 0.01);
    EXPECT_EQ(S.coeffs[0], F.coeffs[0]);
    for (std::size_t i = 0; i < F.size(); ++i) EXPECT_LE(std::abs(S.coeffs[i]), std::abs(F.coeffs[i]));
    EXPECT_THROW(diffusion_semigroup(F, -1.0), ConfigError);
}

TEST(Mollify, TrivialCases) {
    const auto g = make_grid(2, 16, 2.0);
    const auto f = smooth_random(g, 12, 5.0);
    EXPECT_EQ(max_diff(mollify(f, 0.0), f), 0.0);
    const RealField one(g, 1.0);
    EXPECT_LE(max_diff(mollify(one, 0.3), one), 1e-15);
    EXPECT_THROW(mollify(f, -0.1), ConfigError);
}

TEST(Mollify, NormStrictlyDecreasesWithWidth) {
    const auto g = make_grid(2, 32, 2.0 * kPi);
    const auto f = smooth_random(g, 13, 10.0);
    double prev = std::sqrt(spectral_l2_squared(to_spectral(f)));
    for (double eps : {0.1, 0.2, 0.4}) {
        const double n = std::sqrt(spectral_l2_squared(to_spectral(mollify(f, eps))));
        EXPECT_LT(n, prev) << "eps = " << eps;
        prev = n;
    }
}

TEST(Mollify, MatchesRealSpaceConvolution) {
    const auto g = make_grid(2, 32, 2.0 * kPi);
    const auto f = smooth_random(g, 21, 6.0, 0.5);
    const auto expected = testing_support::brute_force_mollify(f, 0.3);
    EXPECT_LE(max_diff(mollify(f, 0.3), expected), 1e-10 * max_abs(expected));
}

TEST(GalerkinProjector, BelowCutoffUnchanged) {
    const auto g = make_grid(2, 16, 3.0);
    const double k2 = g->k_min() * g->k_min();
    auto v = cos_mode(g, 1, 0, 0.0, 1.0);
    const auto w = cos_mode(g, 0, 1, 1.0, 0.0);
    for (std::size_t k = 0; k < 2; ++k) v[k] += w[k];
    EXPECT_LE(max_diff(project_pl(v, 4.0 * k2), v), 1e-15);
}

TEST(GalerkinProjector, BelowFirstModeKeepsOnlyMean) {
    const auto g = make_grid(2, 16, 3.0);
    NormalSource rng(5);
    VectorField v(g);
    for (auto& c : v.components) c = white_noise(g, rng);
    const auto p = project_pl(v, 0.5 * g->k_min() * g->k_min());
    for (std::size_t k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (double x : v[k].values) mean += x;
        mean /= static_cast<double>(v[k].size());
        for (double x : p[k].values) EXPECT_NEAR(x, mean, 1e-14);
    }
    EXPECT_THROW(project_pl(v, 0.0), ConfigError);
}

TEST(GalerkinProjector, GradientBoundAtLevel25) {
    const auto g = make_grid(2, 32, 2.0 * kPi);
    NormalSource rng(25);
    const auto v = random_solenoidal_field(g, rng);
    auto P = to_spectral(project_pl(v, 25.0));
    double g2 = 0.0;
    for (const auto& c : P) g2 += spectral_sobolev_squared(c, 1);
    EXPECT_LE(std::sqrt(g2), 5.0 * testing_support::l2(v));
}

TEST(GalerkinProjector, PropertyBoundsOnRandomFields) {
    const auto g = make_grid(2, 32, 2.0 * kPi);
    NormalSource rng(99);
    for (double l : {1.0, 4.0, 16.0, 64.0}) {
        for (int t = 0; t < 100; ++t) {
            const auto v = random_solenoidal_field(g, rng);
            const double vn = testing_support::l2(v);
            auto P = to_spectral(v);
            project_pl_inplace(P, l);
            double g2 = 0.0, l2 = 0.0;
            for (const auto& c : P) {
                g2 += spectral_sobolev_squared(c, 1);
                l2 += spectral_sobolev_squared(c, 2);
            }
            ASSERT_LE(std::sqrt(g2), std::sqrt(l) * vn * (1.0 + 1e-12)) << "l = " << l;
            ASSERT_LE(std::sqrt(l2), l * vn * (1.0 + 1e-12)) << "l = " << l;
            auto again = P;
            project_pl_inplace(again, l);
            double scale = 0.0, diff = 0.0;
            for (std::size_t a = 0; a < P.size(); ++a)
                for (std::size_t i = 0; i < P[a].size(); ++i) {
                    scale = std::max(scale, std::abs(P[a].coeffs[i]));
                    diff = std::max(diff, std::abs(again[a].coeffs[i] - P[a].coeffs[i]));
                }
            ASSERT_LE(diff, 1e-12 * scale);
        }
    }
}

TEST(GalerkinProjector, GradientBoundTightOnShell) {
    // |k|^2 = 25 = l exactly: (3,4) and (5,0) modes.
    const auto g = make_grid(2, 32, 2.0 * kPi);
    auto v = cos_mode(g, 3, 4, 4.0, -3.0);
    const auto w = cos_mode(g, 0, 5, 1.0, 0.0);
    for (std::size_t k = 0; k < 2; ++k) v[k] += w[k];
    auto P = to_spectral(project_pl(v, 25.0));
    double g2 = 0.0;
    for (const auto& c : P) g2 += spectral_sobolev_squared(c, 1);
    const double bound = 5.0 * testing_support::l2(v);
    EXPECT_NEAR(std::sqrt(g2), bound, 1e-12 * bound);
}

TEST(Commutation, DiagonalOperatorsCommuteWithSemigroup) {
    const auto g = make_grid(2, 32, 4.0);
    NormalSource rng(31);
    VectorField v(g);
    for (auto& c : v.components) c = white_noise(g, rng);
    const double dt = 0.05;
    auto semigroup = [&](const VectorField& x) {
        VectorField out(g);
        for (std::size_t a = 0; a < 2; ++a) out[a] = to_real(diffusion_semigroup(to_spectral(x[a]), dt));
        return out;
    };
    auto check = [&](const char* name, auto op) {
        const auto a = semigroup(op(v));
        const auto b = op(semigroup(v));
        EXPECT_LE(max_diff(a, b), 1e-13 * max_abs(v)) << name;
    };
    check("leray", [](const VectorField& x) { return leray_project(x); });
    check("P_l", [](const VectorField& x) { return project_pl(x, 30.0); });
    check("mollify", [](const VectorField& x) { return mollify(x, 0.2); });
    check("dealias", [&](const VectorField& x) {
        VectorField out(g);
        for (std::size_t a = 0; a < 2; ++a) out[a] = to_real(dealias(to_spectral(x[a])));
        return out;
    });
}
