#pragma once

// Transforms and Fourier-diagonal operators on the periodic grid.
//
// Spectral coefficients are normalized so that F(0) is the mean of the field:
//   F(k) = N^-d * sum_x f(x) exp(-i k.x),   f(x) = sum_k F(k) exp(i k.x).
// With this convention ||f||_{L2}^2 = L^d * sum_k |F(k)|^2.

#include <cmath>
#include <limits>
#include <span>

#include "chemoflow/fft.hpp"
#include "chemoflow/grid.hpp"

namespace chemoflow {

inline SpectralField to_spectral(const RealField& f) {
    SpectralField out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.coeffs[i] = Complex(f.values[i], 0.0);
    detail::plan_for(*f.grid).forward(out.coeffs);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

inline RealField to_real(const SpectralField& F) {
    std::vector<Complex> buf = F.coeffs;
    detail::plan_for(*F.grid).backward(buf);
    RealField out(F.grid);
    for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
    return out;
}

inline SpectralVector to_spectral(const VectorField& v) {
    SpectralVector out;
    out.reserve(v.components.size());
    for (const auto& c : v.components) out.push_back(to_spectral(c));
    return out;
}

inline VectorField to_real(const SpectralVector& v) {
    VectorField out;
    out.components.reserve(v.size());
    for (const auto& c : v) out.components.push_back(to_real(c));
    return out;
}

// ---------------------------------------------------------------------------
// Spectral-space kernels. These operate on coefficients directly and are the
// building blocks for the model tendencies.

inline SpectralVector spectral_gradient(const SpectralField& F) {
    const Grid& g = *F.grid;
    SpectralVector out(static_cast<std::size_t>(g.dim), SpectralField(F.grid));
    for (int a = 0; a < g.dim; ++a) {
        const auto& k = g.k_odd[static_cast<std::size_t>(a)];
        auto& dst = out[static_cast<std::size_t>(a)].coeffs;
        for (std::size_t i = 0; i < F.size(); ++i) dst[i] = Complex(0.0, k[i]) * F.coeffs[i];
    }
    return out;
}

inline SpectralField spectral_divergence(const SpectralVector& V) {
    const Grid& g = *V.front().grid;
    SpectralField out(V.front().grid);
    for (int a = 0; a < g.dim; ++a) {
        const auto& k = g.k_odd[static_cast<std::size_t>(a)];
        const auto& src = V[static_cast<std::size_t>(a)].coeffs;
        for (std::size_t i = 0; i < out.size(); ++i) out.coeffs[i] += Complex(0.0, k[i]) * src[i];
    }
    return out;
}

inline void spectral_laplacian_inplace(SpectralField& F) {
    const auto& ksq = F.grid->k_squared;
    for (std::size_t i = 0; i < F.size(); ++i) F.coeffs[i] *= -ksq[i];
}

inline void dealias_inplace(SpectralField& F) {
    const auto& mask = F.grid->dealias_mask;
    for (std::size_t i = 0; i < F.size(); ++i)
        if (!mask[i]) F.coeffs[i] = Complex(0.0, 0.0);
}

/// Solenoidal projection (I - k k^T / |k|^2) at every mode, identity at k = 0.
inline void leray_project_inplace(SpectralVector& V) {
    const Grid& g = *V.front().grid;
    const std::size_t d = static_cast<std::size_t>(g.dim);
    for (std::size_t i = 0; i < V.front().size(); ++i) {
        double kk = 0.0;
        for (std::size_t a = 0; a < d; ++a) kk += g.k_odd[a][i] * g.k_odd[a][i];
        if (kk == 0.0) continue;
        Complex kdotv(0.0, 0.0);
        for (std::size_t a = 0; a < d; ++a) kdotv += g.k_odd[a][i] * V[a].coeffs[i];
        const Complex s = kdotv / kk;
        for (std::size_t a = 0; a < d; ++a) V[a].coeffs[i] -= g.k_odd[a][i] * s;
    }
}

/// Galerkin projector: Leray projection followed by the sharp cutoff |k|^2 <= l.
/// An infinite l reduces to the Leray projection.
inline void project_pl_inplace(SpectralVector& V, double l) {
    if (!(l > 0.0)) throw ConfigError("projector level l must be positive");
    leray_project_inplace(V);
    if (std::isinf(l)) return;
    const auto& ksq = V.front().grid->k_squared;
    for (auto& comp : V)
        for (std::size_t i = 0; i < comp.size(); ++i)
            if (ksq[i] > l) comp.coeffs[i] = Complex(0.0, 0.0);
}

inline void heat_multiplier_inplace(SpectralField& F, double dt) {
    if (dt == 0.0) return;
    const auto& ksq = F.grid->k_squared;
    for (std::size_t i = 0; i < F.size(); ++i) F.coeffs[i] *= std::exp(-ksq[i] * dt);
}

inline void mollify_inplace(SpectralField& F, double eps) {
    if (eps < 0.0) throw ConfigError("mollifier width must be nonnegative");
    if (eps == 0.0) return;
    const auto& ksq = F.grid->k_squared;
    const double a = 0.5 * eps * eps;
    for (std::size_t i = 0; i < F.size(); ++i) F.coeffs[i] *= std::exp(-a * ksq[i]);
}

/// ||f||_{L2}^2 computed from coefficients.
inline double spectral_l2_squared(const SpectralField& F) {
    std::vector<double> m(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) m[i] = std::norm(F.coeffs[i]);
    return F.grid->volume() * pairwise_sum(m);
}

/// ||grad^order f||_{L2}^2 = L^d sum |k|^(2 order) |F|^2.
inline double spectral_sobolev_squared(const SpectralField& F, int order) {
    const auto& ksq = F.grid->k_squared;
    std::vector<double> m(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) m[i] = std::pow(ksq[i], order) * std::norm(F.coeffs[i]);
    return F.grid->volume() * pairwise_sum(m);
}

// ---------------------------------------------------------------------------
// Real-space front ends.

inline VectorField gradient(const RealField& f) { return to_real(spectral_gradient(to_spectral(f))); }

inline RealField divergence(const VectorField& v) { return to_real(spectral_divergence(to_spectral(v))); }

inline RealField laplacian(const RealField& f) {
    auto F = to_spectral(f);
    spectral_laplacian_inplace(F);
    return to_real(F);
}

inline SpectralField dealias(SpectralField F) {
    dealias_inplace(F);
    return F;
}

inline VectorField leray_project(const VectorField& v) {
    auto V = to_spectral(v);
    leray_project_inplace(V);
    return to_real(V);
}

inline SpectralField diffusion_semigroup(SpectralField F, double dt) {
    if (dt < 0.0) throw ConfigError("diffusion semigroup requires dt >= 0");
    heat_multiplier_inplace(F, dt);
    return F;
}

inline RealField mollify(const RealField& f, double eps) {
    if (eps < 0.0) throw ConfigError("mollifier width must be nonnegative");
    if (eps == 0.0) return f;
    auto F = to_spectral(f);
    mollify_inplace(F, eps);
    return to_real(F);
}

inline VectorField mollify(const VectorField& v, double eps) {
    VectorField out;
    for (const auto& c : v.components) out.components.push_back(mollify(c, eps));
    return out;
}

inline VectorField project_pl(const VectorField& v, double l) {
    if (!(l > 0.0)) throw ConfigError("projector level l must be positive");
    auto V = to_spectral(v);
    project_pl_inplace(V, l);
    return to_real(V);
}

/// max |div v| evaluated spectrally.
inline double max_divergence(const VectorField& v) {
    auto div = divergence(v);
    double m = 0.0;
    for (double x : div.values) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double x : f.values) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const VectorField& v) {
    double m = 0.0;
    for (const auto& c : v.components) m = std::max(m, max_abs(c));
    return m;
}

}  // namespace chemoflow
