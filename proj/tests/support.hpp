#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "chemoflow/random.hpp"
#include "chemoflow/spectral.hpp"

namespace testing_support {

using namespace chemoflow;

/// Random real field with integer wavevector norm <= band and the given mean.
inline RealField smooth_random(const GridPtr& g, std::uint64_t seed, double band, double mean = 0.0,
                               double amplitude = 1.0) {
    NormalSource rng(seed);
    auto F = to_spectral(white_noise(g, rng));
    band_limit_inplace(F, band);
    auto f = to_real(F);
    const double m = max_abs(f);
    for (double& x : f.values) x = mean + amplitude * x / m;
    return f;
}

inline RealField sample(const GridPtr& g, const std::function<double(double, double, double)>& fn) {
    RealField f(g);
    const double h = g->spacing();
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto idx = g->unflatten(i);
        f.values[i] = fn(idx[0] * h, idx[1] * h, idx[2] * h);
    }
    return f;
}

inline double max_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.components.size(); ++k) m = std::max(m, max_diff(a[k], b[k]));
    return m;
}

inline double l2(const VectorField& v) {
    double s = 0.0;
    for (const auto& c : v.components) s += spectral_l2_squared(to_spectral(c));
    return std::sqrt(s);
}

/// Real-space convolution with the periodized Gaussian kernel of width eps
/// (2D), by direct quadrature over the grid.
inline RealField brute_force_mollify(const RealField& f, double eps, int images = 2) {
    const auto& g = f.grid;
    const int N = g->points;
    const double h = g->spacing(), L = g->length;
    std::vector<double> kernel(static_cast<std::size_t>(N) * N, 0.0);
    const double norm = 1.0 / (2.0 * std::numbers::pi * eps * eps);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int a = -images; a <= images; ++a)
                for (int b = -images; b <= images; ++b) {
                    const double x = i * h + a * L, y = j * h + b * L;
                    s += std::exp(-(x * x + y * y) / (2.0 * eps * eps));
                }
            kernel[static_cast<std::size_t>(i) * N + j] = norm * s * h * h;
        }
    RealField out(g);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int p = 0; p < N; ++p)
                for (int q = 0; q < N; ++q) {
                    const int di = (i - p + N) % N, dj = (j - q + N) % N;
                    s += kernel[static_cast<std::size_t>(di) * N + dj] * f.values[static_cast<std::size_t>(p) * N + q];
                }
            out.values[static_cast<std::size_t>(i) * N + j] = s;
        }
    return out;
}

}  // namespace testing_support
