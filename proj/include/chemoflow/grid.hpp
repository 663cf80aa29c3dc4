#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "chemoflow/error.hpp"

namespace chemoflow {

using Complex = std::complex<double>;

/// Uniform periodic grid on [0, L)^d, the discrete stand-in for the whole space.
///
/// Samples are stored row-major with axis 0 slowest. Axis index i maps to the
/// integer mode m = i for i <= N/2 and m = i - N otherwise, so every axis covers
/// the modes {-N/2+1, ..., N/2}. Physical wavenumbers are m * 2*pi/L.
struct Grid {
    int dim = 0;
    int points = 0;
    double length = 0.0;

    /// Integer mode per axis index.
    std::vector<int> modes;
    /// Physical wavenumber per axis index.
    std::vector<double> wavenumbers;
    /// Same as wavenumbers with the Nyquist entry zeroed; used by odd-order
    /// derivatives so that real data stays real.
    std::vector<double> odd_wavenumbers;

    /// |k|^2 per flat index.
    std::vector<double> k_squared;
    /// Odd-derivative wavenumber component per axis and flat index.
    std::array<std::vector<double>, 3> k_odd;
    /// True where every |m_j| <= N/3 (2/3 rule).
    std::vector<bool> dealias_mask;

    [[nodiscard]] std::size_t size() const noexcept { return k_squared.size(); }
    [[nodiscard]] double spacing() const noexcept { return length / points; }
    [[nodiscard]] double cell_volume() const noexcept { return std::pow(spacing(), dim); }
    [[nodiscard]] double volume() const noexcept { return std::pow(length, dim); }
    [[nodiscard]] double k_min() const noexcept { return 2.0 * std::numbers::pi / length; }
    [[nodiscard]] double k_squared_max() const noexcept {
        double kn = wavenumbers[static_cast<std::size_t>(points / 2)];
        return dim * kn * kn;
    }

    /// Axis indices of a flat index.
    [[nodiscard]] std::array<int, 3> unflatten(std::size_t flat) const noexcept {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(points));
            flat /= static_cast<std::size_t>(points);
        }
        return idx;
    }

    /// Coordinates of a sample relative to the box centre.
    [[nodiscard]] std::array<double, 3> centered_position(std::size_t flat) const noexcept {
        auto idx = unflatten(flat);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        const double h = spacing();
        for (int a = 0; a < dim; ++a)
            x[static_cast<std::size_t>(a)] = idx[static_cast<std::size_t>(a)] * h - 0.5 * length;
        return x;
    }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int dim, int points, double length) {
    if (dim != 2 && dim != 3)
        throw ConfigError("grid dimension must be 2 or 3, got " + std::to_string(dim));
    if (points < 8 || points % 2 != 0)
        throw ConfigError("grid points per axis must be even and >= 8, got " + std::to_string(points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ConfigError("box length must be positive and finite");

    auto g = std::make_shared<Grid>();
    g->dim = dim;
    g->points = points;
    g->length = length;

    const double dk = 2.0 * std::numbers::pi / length;
    const auto n = static_cast<std::size_t>(points);
    g->modes.resize(n);
    g->wavenumbers.resize(n);
    g->odd_wavenumbers.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int m = static_cast<int>(i) <= points / 2 ? static_cast<int>(i) : static_cast<int>(i) - points;
        g->modes[i] = m;
        g->wavenumbers[i] = m * dk;
        g->odd_wavenumbers[i] = (m == points / 2) ? 0.0 : m * dk;
    }

    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= n;
    g->k_squared.resize(total);
    g->dealias_mask.resize(total);
    for (int a = 0; a < dim; ++a) g->k_odd[static_cast<std::size_t>(a)].resize(total);

    const int cut = points / 3;
    for (std::size_t f = 0; f < total; ++f) {
        auto idx = g->unflatten(f);
        double ksq = 0.0;
        bool keep = true;
        for (int a = 0; a < dim; ++a) {
            const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
            ksq += g->wavenumbers[i] * g->wavenumbers[i];
            g->k_odd[static_cast<std::size_t>(a)][f] = g->odd_wavenumbers[i];
            if (std::abs(g->modes[i]) > cut) keep = false;
        }
        g->k_squared[f] = ksq;
        g->dealias_mask[f] = keep;
    }
    return g;
}

/// Fixed-tree pairwise summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
    constexpr std::size_t leaf = 64;
    if (v.size() <= leaf) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

struct RealField {
    GridPtr grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(GridPtr g, double fill = 0.0) : grid(std::move(g)), values(grid->size(), fill) {}

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) noexcept { return values[i]; }
    double operator[](std::size_t i) const noexcept { return values[i]; }

    RealField& operator+=(const RealField& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
        return *this;
    }
    RealField& operator-=(const RealField& o) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
        return *this;
    }
    RealField& operator*=(double a) {
        for (double& x : values) x *= a;
        return *this;
    }
};

struct SpectralField {
    GridPtr grid;
    std::vector<Complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(GridPtr g) : grid(std::move(g)), coeffs(grid->size()) {}

    [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
    Complex& operator[](std::size_t i) noexcept { return coeffs[i]; }
    Complex operator[](std::size_t i) const noexcept { return coeffs[i]; }

    SpectralField& operator+=(const SpectralField& o) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& x : coeffs) x *= a;
        return *this;
    }
};

struct VectorField {
    std::vector<RealField> components;

    VectorField() = default;
    explicit VectorField(const GridPtr& g) {
        components.reserve(static_cast<std::size_t>(g->dim));
        for (int a = 0; a < g->dim; ++a) components.emplace_back(g);
    }

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(components.size()); }
    [[nodiscard]] const GridPtr& grid() const { return components.front().grid; }
    RealField& operator[](std::size_t a) noexcept { return components[a]; }
    const RealField& operator[](std::size_t a) const noexcept { return components[a]; }
};

using SpectralVector = std::vector<SpectralField>;

inline void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get() && (a->dim != b->dim || a->points != b->points || a->length != b->length))
        throw ConfigError("fields live on different grids");
}

}  // namespace chemoflow
