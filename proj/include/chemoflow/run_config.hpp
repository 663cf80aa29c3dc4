#pragma once

// Experiment description and construction of the initial state from it.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/grid.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/random.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

struct GridSpec {
    int dim = 2;
    int points = 64;
    double length = 2.0 * std::numbers::pi;
};

struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    double depth = 0.0;
    double width = 1.0;
    std::string path;  // user_grid: raw little-endian float64 samples, row-major
};

enum class ProfileKind { zero, gaussian };

/// amplitude * exp(-|x - centre - offset|^2 / (2 width^2))
struct ProfileSpec {
    ProfileKind kind = ProfileKind::zero;
    double amplitude = 0.0;
    double width = 1.0;
    std::array<double, 3> offset{0.0, 0.0, 0.0};
};

enum class VelocityKind { zero, taylor_green, random };

struct VelocitySpec {
    VelocityKind kind = VelocityKind::zero;
    double amplitude = 1.0;
};

enum class Scheme { etd_rk2 };

struct IntegratorConfig {
    double dt_init = 1e-3;
    double cfl_safety = 0.5;
    double dt_min = 1e-6;
    double dt_max = 1e-2;
    double t_end = 1.0;
    Scheme scheme = Scheme::etd_rk2;
    double tol_pos = 1e-8;  // relative to the field maximum
};

inline void validate(const IntegratorConfig& c) {
    if (!(c.dt_min > 0.0 && c.dt_min <= c.dt_init && c.dt_init <= c.dt_max))
        throw ConfigError("integrator requires 0 < dt_min <= dt_init <= dt_max");
    if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(c.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (!(c.tol_pos >= 0.0)) throw ConfigError("tol_pos must be nonnegative");
}

enum class ValidityAction { warn, stop };

struct RunConfig {
    GridSpec grid;
    double kappa = 1.0;
    ScalarLaw chi = ScalarLaw::constant(0.0);
    ScalarLaw f = ScalarLaw::constant(0.0);
    PotentialSpec potential;
    ProfileSpec n0;
    ProfileSpec c0;
    VelocitySpec u0;
    IntegratorConfig integrator;
    DiagnosticsConfig diagnostics;
    ValidityAction validity_action = ValidityAction::warn;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------

inline RealField make_profile(const GridPtr& g, const ProfileSpec& p) {
    RealField f(g);
    if (p.kind == ProfileKind::zero) return f;
    if (!(p.width > 0.0)) throw ConfigError("profile width must be positive");
    const double w2 = 2.0 * p.width * p.width;
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto x = g->centered_position(i);
        double r2 = 0.0;
        for (int a = 0; a < g->dim; ++a) {
            const double dx = x[static_cast<std::size_t>(a)] - p.offset[static_cast<std::size_t>(a)];
            r2 += dx * dx;
        }
        f.values[i] = p.amplitude * std::exp(-r2 / w2);
    }
    return f;
}

/// Taylor-Green vortex at the lowest box mode; divergence-free in 2D and 3D.
inline VectorField taylor_green(const GridPtr& g, double amplitude) {
    VectorField u(g);
    const double k = g->k_min();
    const double h = g->spacing();
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto idx = g->unflatten(i);
        const double x = k * idx[0] * h, y = k * idx[1] * h, z = g->dim == 3 ? k * idx[2] * h : 0.0;
        u[0].values[i] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
        u[1].values[i] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
    }
    return u;
}

inline RealField read_raw_field(const GridPtr& g, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open potential file '" + path + "'");
    RealField f(g);
    in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.size() * sizeof(double)))
        throw IoError("potential file '" + path + "' is shorter than N^d float64 samples");
    return f;
}

/// Last time at which every localized initial profile, spread diffusively,
/// stays inside half the box: |offset| + 4 sqrt(width^2 + 2t) <= L/2.
inline double validity_horizon(const RunConfig& cfg) {
    double t_valid = std::numeric_limits<double>::infinity();
    for (const auto* p : {&cfg.n0, &cfg.c0}) {
        if (p->kind != ProfileKind::gaussian || p->amplitude == 0.0) continue;
        double off2 = 0.0;
        for (int a = 0; a < cfg.grid.dim; ++a) off2 += p->offset[static_cast<std::size_t>(a)] * p->offset[static_cast<std::size_t>(a)];
        const double reach = (0.5 * cfg.grid.length - std::sqrt(off2)) / 4.0;
        const double t = reach > 0.0 ? (reach * reach - p->width * p->width) / 2.0 : 0.0;
        t_valid = std::min(t_valid, std::max(t, 0.0));
    }
    return t_valid;
}

struct Setup {
    GridPtr grid;
    ModelParams params;
    State initial;
    double t_valid = 0.0;
};

/// Builds grid, parameters and initial state; u0 is projected divergence-free
/// and the discrete n0 >= 0, c0 >= 0 requirement is enforced.
inline Setup build_setup(const RunConfig& cfg) {
    validate(cfg.integrator);
    Setup s;
    s.grid = make_grid(cfg.grid.dim, cfg.grid.points, cfg.grid.length);
    const auto& g = s.grid;

    State st = make_rest_state(g);
    st.n = make_profile(g, cfg.n0);
    st.c = make_profile(g, cfg.c0);
    if (field_min(st.n) < 0.0) throw ConfigError("initial data violates assumption (C): n0 must be nonnegative");
    if (field_min(st.c) < 0.0) throw ConfigError("initial data violates assumption (C): c0 must be nonnegative");

    switch (cfg.u0.kind) {
        case VelocityKind::zero: break;
        case VelocityKind::taylor_green: st.u = taylor_green(g, cfg.u0.amplitude); break;
        case VelocityKind::random: {
            NormalSource rng(cfg.seed);
            st.u = random_solenoidal_field(g, rng);
            const double m = max_abs(st.u);
            if (m > 0.0)
                for (auto& c : st.u.components) c *= cfg.u0.amplitude / m;
            break;
        }
    }
    st.u = leray_project(st.u);

    Potential pot = make_zero_potential(g);
    switch (cfg.potential.kind) {
        case PotentialKind::zero: break;
        case PotentialKind::gaussian_well: pot = make_gaussian_well(g, cfg.potential.depth, cfg.potential.width); break;
        case PotentialKind::user_grid: pot = make_grid_potential(read_raw_field(g, cfg.potential.path)); break;
    }

    s.params = make_model_params(cfg.kappa, cfg.chi, cfg.f, std::move(pot), lp_norm(st.c, kInf));
    s.initial = std::move(st);
    s.t_valid = validity_horizon(cfg);
    return s;
}

}  // namespace chemoflow
