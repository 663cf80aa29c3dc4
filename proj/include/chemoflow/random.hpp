#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "chemoflow/grid.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

/// Standard normal deviates from mt19937_64 via Box-Muller. The distribution
/// code is spelled out so that a seed gives the same numbers with any
/// standard library.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53 random bits in (0, 1).
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline RealField white_noise(const GridPtr& g, NormalSource& rng) {
    RealField f(g);
    for (double& x : f.values) x = rng();
    return f;
}

/// Removes every mode whose integer wavevector norm exceeds band.
inline void band_limit_inplace(SpectralField& F, double band) {
    const Grid& g = *F.grid;
    for (std::size_t i = 0; i < F.size(); ++i) {
        auto idx = g.unflatten(i);
        double m2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const int m = g.modes[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
            m2 += static_cast<double>(m) * m;
        }
        if (m2 > band * band) F.coeffs[i] = Complex(0.0, 0.0);
    }
}

/// White-noise vector field, Leray-projected and band-limited to |m| <= N/4,
/// with the mean removed.
inline VectorField random_solenoidal_field(const GridPtr& g, NormalSource& rng) {
    VectorField v(g);
    for (auto& c : v.components) c = white_noise(g, rng);
    auto V = to_spectral(v);
    leray_project_inplace(V);
    for (auto& c : V) {
        band_limit_inplace(c, g->points / 4.0);
        c.coeffs[0] = Complex(0.0, 0.0);
    }
    return to_real(V);
}

}  // namespace chemoflow
