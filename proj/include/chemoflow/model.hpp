#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chemoflow/grid.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

// ---------------------------------------------------------------------------
// Scalar laws chi(c) and f(c)

enum class LawKind { constant, linear, saturating, polynomial };

inline const char* to_string(LawKind k) {
    switch (k) {
        case LawKind::constant: return "constant";
        case LawKind::linear: return "linear";
        case LawKind::saturating: return "saturating";
        case LawKind::polynomial: return "polynomial";
    }
    return "?";
}

/// One of four C^1 parametric families:
///   constant    a
///   linear      a c
///   saturating  a c / (1 + b c)      (b defaults to 1)
///   polynomial  a0 + a1 c + a2 c^2 + ...
struct ScalarLaw {
    LawKind kind = LawKind::constant;
    std::vector<double> coefficients{0.0};

    static ScalarLaw constant(double a) { return {LawKind::constant, {a}}; }
    static ScalarLaw linear(double a) { return {LawKind::linear, {a}}; }
    static ScalarLaw saturating(double a, double b = 1.0) { return {LawKind::saturating, {a, b}}; }
    static ScalarLaw polynomial(std::vector<double> a) { return {LawKind::polynomial, std::move(a)}; }

    [[nodiscard]] double coeff(std::size_t i, double fallback = 0.0) const {
        return i < coefficients.size() ? coefficients[i] : fallback;
    }

    [[nodiscard]] double value(double c) const {
        switch (kind) {
            case LawKind::constant: return coeff(0);
            case LawKind::linear: return coeff(0) * c;
            case LawKind::saturating: return coeff(0) * c / (1.0 + coeff(1, 1.0) * c);
            case LawKind::polynomial: {
                double acc = 0.0;
                for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * c + *it;
                return acc;
            }
        }
        return 0.0;
    }

    [[nodiscard]] double derivative(double c) const {
        switch (kind) {
            case LawKind::constant: return 0.0;
            case LawKind::linear: return coeff(0);
            case LawKind::saturating: {
                const double q = 1.0 + coeff(1, 1.0) * c;
                return coeff(0) / (q * q);
            }
            case LawKind::polynomial: {
                double acc = 0.0;
                for (std::size_t i = coefficients.size(); i-- > 1;) acc = acc * c + static_cast<double>(i) * coefficients[i];
                return acc;
            }
        }
        return 0.0;
    }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(coefficients.begin(), coefficients.end(), [](double a) { return a == 0.0; });
    }
};

inline RealField eval_law(const ScalarLaw& law, const RealField& c) {
    RealField out(c.grid);
    for (std::size_t i = 0; i < c.size(); ++i) out.values[i] = law.value(std::max(c.values[i], 0.0));
    return out;
}

inline RealField eval_law_deriv(const ScalarLaw& law, const RealField& c) {
    RealField out(c.grid);
    for (std::size_t i = 0; i < c.size(); ++i) out.values[i] = law.derivative(std::max(c.values[i], 0.0));
    return out;
}

inline constexpr int kSupSamples = 10000;
inline constexpr double kSupSafety = 1.001;

/// sup over [0, c_inf] of |law| + |law'| by dense sampling, times a 1.001 safety factor.
inline double sup_bounds(const ScalarLaw& law, double c_inf) {
    if (c_inf < 0.0) throw ConfigError("sup_bounds requires c_inf >= 0");
    double m = 0.0;
    for (int i = 0; i <= kSupSamples; ++i) {
        const double c = c_inf * i / kSupSamples;
        m = std::max(m, std::abs(law.value(c)) + std::abs(law.derivative(c)));
    }
    return kSupSafety * m;
}

/// Checks that f(0) = 0 and f >= 0 on [0, c_inf].
inline void validate_consumption_law(const ScalarLaw& f, double c_inf) {
    if (f.value(0.0) != 0.0)
        throw ConfigError("consumption law violates assumption (A): f(0) = " + std::to_string(f.value(0.0)) +
                          " but f(0) = 0 is required");
    for (int i = 0; i <= kSupSamples; ++i) {
        const double c = c_inf * i / kSupSamples;
        if (f.value(c) < 0.0)
            throw ConfigError("consumption law violates assumption (A): f(" + std::to_string(c) + ") < 0");
    }
}

// ---------------------------------------------------------------------------
// Potential phi

enum class PotentialKind { zero, gaussian_well, user_grid };

struct Potential {
    PotentialKind kind = PotentialKind::zero;
    std::vector<double> parameters;
    RealField phi;
    VectorField grad_phi;

    [[nodiscard]] bool is_zero() const { return kind == PotentialKind::zero; }
};

inline Potential make_zero_potential(const GridPtr& g) {
    Potential p;
    p.phi = RealField(g);
    p.grad_phi = VectorField(g);
    return p;
}

/// phi(x) = -depth * exp(-|x - centre|^2 / (2 width^2)), gradient taken spectrally.
inline Potential make_gaussian_well(const GridPtr& g, double depth, double width) {
    if (!(width > 0.0)) throw ConfigError("gaussian_well width must be positive");
    Potential p;
    p.kind = PotentialKind::gaussian_well;
    p.parameters = {depth, width};
    p.phi = RealField(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto x = g->centered_position(i);
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        p.phi.values[i] = -depth * std::exp(-r2 / (2.0 * width * width));
    }
    p.grad_phi = gradient(p.phi);
    return p;
}

inline Potential make_grid_potential(RealField phi) {
    Potential p;
    p.kind = PotentialKind::user_grid;
    p.grad_phi = gradient(phi);
    p.phi = std::move(phi);
    return p;
}

/// Weight in the decay estimate: |x| in 3D, (1+|x|)(1+ln(1+|x|)) in 2D,
/// with x measured from the box centre.
inline double omega_weight(int dim, double r) {
    if (dim == 3) return r;
    return (1.0 + r) * (1.0 + std::log1p(r));
}

/// M = sup_x (omega(x) |grad phi(x)|)^2 over the grid.
inline double weighted_potential_sup(const Potential& p) {
    if (p.grad_phi.components.empty()) return 0.0;
    const Grid& g = *p.grad_phi.grid();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.centered_position(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        double gp2 = 0.0;
        for (const auto& comp : p.grad_phi.components) gp2 += comp.values[i] * comp.values[i];
        const double w = omega_weight(g.dim, r);
        m = std::max(m, w * w * gp2);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Parameters and state

struct ModelParams {
    double kappa = 1.0;
    ScalarLaw chi = ScalarLaw::constant(0.0);
    ScalarLaw f = ScalarLaw::constant(0.0);
    Potential potential;
    double c_inf = 0.0;
    double C_chi = 0.0;
    double C_f = 0.0;
};

/// Validates the consumption law against [0, c_inf] and caches the sup bounds.
inline ModelParams make_model_params(double kappa, ScalarLaw chi, ScalarLaw f, Potential potential, double c_inf) {
    if (c_inf < 0.0) throw ConfigError("c_inf must be nonnegative");
    validate_consumption_law(f, c_inf);
    ModelParams p;
    p.kappa = kappa;
    p.C_chi = sup_bounds(chi, c_inf);
    p.C_f = sup_bounds(f, c_inf);
    p.chi = std::move(chi);
    p.f = std::move(f);
    p.potential = std::move(potential);
    p.c_inf = c_inf;
    return p;
}

struct State {
    double t = 0.0;
    RealField n;
    RealField c;
    VectorField u;

    [[nodiscard]] const GridPtr& grid() const { return n.grid; }
};

inline State make_rest_state(const GridPtr& g) { return State{0.0, RealField(g), RealField(g), VectorField(g)}; }

/// Spectral companion of a State; this is what the integrator advances.
struct SpectralState {
    double t = 0.0;
    SpectralField n;
    SpectralField c;
    SpectralVector u;
};

inline SpectralState to_spectral(const State& s) {
    return SpectralState{s.t, to_spectral(s.n), to_spectral(s.c), to_spectral(s.u)};
}

inline State to_real(const SpectralState& s) { return State{s.t, to_real(s.n), to_real(s.c), to_real(s.u)}; }

struct Tendency {
    RealField dn;
    RealField dc;
    VectorField du;
};

/// Right-hand side in spectral space with the diffusion removed.
struct SpectralTendency {
    SpectralField n;
    SpectralField c;
    SpectralVector u;
};

/// Regularization knobs: Galerkin level l (infinite = plain Leray projection)
/// and mollifier width eps.
struct Regularization {
    double l = std::numeric_limits<double>::infinity();
    double eps = 0.0;

    [[nodiscard]] bool is_inactive() const { return std::isinf(l) && eps == 0.0; }
};

inline void validate(const Regularization& r) {
    if (!(r.l > 0.0)) throw ConfigError("regularization level l must be positive");
    if (r.eps < 0.0) throw ConfigError("mollifier width eps must be nonnegative");
}

namespace detail {

inline void require_finite(const RealField& f, const char* term) {
    for (double x : f.values)
        if (!std::isfinite(x)) throw StepDiverged(std::string("non-finite value in ") + term);
}

inline void mollify_real_inplace(RealField& f, double eps) {
    if (eps == 0.0) return;
    auto F = to_spectral(f);
    mollify_inplace(F, eps);
    f = to_real(F);
}

}  // namespace detail

/// Non-diffusive part of the tendency, every product dealiased.
///
///   n:  -div( u n + n D - P )     D = chi(c) grad c,   P = n grad phi
///   c:  -u.grad c - n f(c)
///   u:  Proj( -kappa div(u (x) u) - n grad phi + chi(c) n grad c )
///
/// With regularization, D, P and n f(c) are mollified and Proj is the Galerkin
/// projector; otherwise Proj is the Leray projection.
inline SpectralTendency nonstiff_tendency(const SpectralState& s, const ModelParams& p,
                                          const Regularization& reg = {}) {
    const GridPtr& g = s.n.grid;
    const auto d = static_cast<std::size_t>(g->dim);
    const std::size_t size = g->size();

    const RealField n = to_real(s.n);
    const RealField c = to_real(s.c);
    const VectorField u = to_real(s.u);
    const VectorField grad_c = to_real(spectral_gradient(s.c));

    const RealField chi = eval_law(p.chi, c);
    const RealField fc = eval_law(p.f, c);
    const bool has_potential = !p.potential.is_zero();

    SpectralTendency out;

    // Cell flux.
    std::vector<RealField> flux(d, RealField(g));
    {
        std::vector<RealField> drift(d, RealField(g));
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t i = 0; i < size; ++i) drift[a].values[i] = chi.values[i] * grad_c[a].values[i];
        std::vector<RealField> pot(d, RealField(g));
        if (has_potential)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t i = 0; i < size; ++i)
                    pot[a].values[i] = n.values[i] * p.potential.grad_phi[a].values[i];
        if (reg.eps > 0.0)
            for (std::size_t a = 0; a < d; ++a) {
                detail::mollify_real_inplace(drift[a], reg.eps);
                if (has_potential) detail::mollify_real_inplace(pot[a], reg.eps);
            }
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t i = 0; i < size; ++i)
                flux[a].values[i] = u[a].values[i] * n.values[i] + n.values[i] * drift[a].values[i] - pot[a].values[i];
            detail::require_finite(flux[a], "cell flux (advection, chemotaxis or potential drift)");
        }
    }
    {
        SpectralVector F;
        F.reserve(d);
        for (auto& f : flux) F.push_back(to_spectral(f));
        out.n = spectral_divergence(F);
        out.n *= -1.0;
        dealias_inplace(out.n);
    }

    // Signal.
    {
        RealField consumption(g);
        for (std::size_t i = 0; i < size; ++i) consumption.values[i] = n.values[i] * fc.values[i];
        detail::mollify_real_inplace(consumption, reg.eps);
        RealField rhs(g);
        for (std::size_t i = 0; i < size; ++i) {
            double adv = 0.0;
            for (std::size_t a = 0; a < d; ++a) adv += u[a].values[i] * grad_c[a].values[i];
            rhs.values[i] = -adv - consumption.values[i];
        }
        detail::require_finite(rhs, "signal advection or consumption");
        out.c = to_spectral(rhs);
        dealias_inplace(out.c);
    }

    // Fluid.
    {
        out.u.assign(d, SpectralField(g));
        for (std::size_t a = 0; a < d; ++a) {
            RealField force(g);
            for (std::size_t i = 0; i < size; ++i) {
                double fa = chi.values[i] * n.values[i] * grad_c[a].values[i];
                if (has_potential) fa -= n.values[i] * p.potential.grad_phi[a].values[i];
                force.values[i] = fa;
            }
            detail::require_finite(force, "fluid forcing (chemotactic or potential force)");
            out.u[a] = to_spectral(force);
        }
        if (p.kappa != 0.0) {
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = a; b < d; ++b) {
                    RealField uu(g);
                    for (std::size_t i = 0; i < size; ++i) uu.values[i] = u[a].values[i] * u[b].values[i];
                    detail::require_finite(uu, "convective term u (x) u");
                    const auto UU = to_spectral(uu);
                    // -kappa * d_b (u_a u_b) into component a, and the symmetric partner.
                    const auto& kb = g->k_odd[b];
                    const auto& ka = g->k_odd[a];
                    for (std::size_t i = 0; i < size; ++i) {
                        out.u[a].coeffs[i] -= p.kappa * Complex(0.0, kb[i]) * UU.coeffs[i];
                        if (b != a) out.u[b].coeffs[i] -= p.kappa * Complex(0.0, ka[i]) * UU.coeffs[i];
                    }
                }
        }
        for (auto& comp : out.u) dealias_inplace(comp);
        project_pl_inplace(out.u, reg.l);
    }
    return out;
}

namespace detail {

inline Tendency assemble_tendency(const SpectralState& s, SpectralTendency nt) {
    auto add_laplacian = [](SpectralField& dst, const SpectralField& src) {
        const auto& ksq = src.grid->k_squared;
        for (std::size_t i = 0; i < src.size(); ++i) dst.coeffs[i] -= ksq[i] * src.coeffs[i];
    };
    add_laplacian(nt.n, s.n);
    add_laplacian(nt.c, s.c);
    for (std::size_t a = 0; a < nt.u.size(); ++a) add_laplacian(nt.u[a], s.u[a]);
    return Tendency{to_real(nt.n), to_real(nt.c), to_real(nt.u)};
}

}  // namespace detail

/// Full right-hand side of the chemotaxis-(Navier-)Stokes system. kappa = 0
/// gives the Stokes variant.
inline Tendency tendency(const State& s, const ModelParams& p) {
    auto S = to_spectral(s);
    return detail::assemble_tendency(S, nonstiff_tendency(S, p));
}

/// Right-hand side of the regularized system at Galerkin level l and mollifier width eps.
inline Tendency tendency_regularized(const State& s, const ModelParams& p, double l, double eps) {
    Regularization reg{l, eps};
    validate(reg);
    auto S = to_spectral(s);
    return detail::assemble_tendency(S, nonstiff_tendency(S, p, reg));
}

// ---------------------------------------------------------------------------
// Smallness hypotheses

struct HypothesisCertificate {
    double p = 1.0;
    double c0_sup = 0.0;
    double C_chi = 0.0;

    // Weighted L^p estimate: beta at the equality case 9p(p-1) C_chi^2 = beta^2.
    double beta = 1.0;
    bool beta_condition = true;
    bool chi_smallness = false;   // C_chi ||c0||_inf <= 1/(12p)
    bool beta_smallness = false;  // ||c0||_inf^2 <= (p-1)/(144 p beta^2)
    double chi_threshold = 0.0;   // 1/(12p)
    double beta_threshold = 0.0;  // sqrt((p-1)/(144 p beta^2)), a bound on ||c0||_inf

    // Decay regime, with its own beta at the equality case 12p(p-1) C_chi^2 = beta^2.
    double beta_decay = 1.0;
    bool decay_beta_condition = true;
    bool decay_chi_smallness = false;
    bool decay_beta_smallness = false;  // ||c0||_inf^2 <= (p-1)/(192 p beta_decay^2)

    double weighted_potential = 0.0;  // M_{omega phi}

    [[nodiscard]] bool lyapunov_regime() const { return beta_condition && chi_smallness && beta_smallness; }
    [[nodiscard]] bool decay_regime() const {
        return decay_beta_condition && decay_chi_smallness && decay_beta_smallness;
    }
};

inline HypothesisCertificate hypothesis_check(const ModelParams& p, const RealField& c0, double p_exp) {
    if (p_exp < 1.0) throw ConfigError("hypothesis_check requires p >= 1");
    HypothesisCertificate cert;
    cert.p = p_exp;
    cert.c0_sup = max_abs(c0);
    cert.C_chi = p.C_chi;

    auto pick_beta = [&](double factor) {
        const double b = std::sqrt(factor * p_exp * (p_exp - 1.0)) * p.C_chi;
        return b > 0.0 ? b : 1.0;
    };
    const double c2 = cert.c0_sup * cert.c0_sup;

    cert.beta = pick_beta(9.0);
    cert.beta_condition = 9.0 * p_exp * (p_exp - 1.0) * p.C_chi * p.C_chi <= cert.beta * cert.beta * (1.0 + 1e-14);
    cert.chi_threshold = 1.0 / (12.0 * p_exp);
    cert.chi_smallness = p.C_chi * cert.c0_sup <= cert.chi_threshold;
    const double bound = (p_exp - 1.0) / (144.0 * p_exp * cert.beta * cert.beta);
    cert.beta_threshold = std::sqrt(bound);
    cert.beta_smallness = c2 <= bound;

    cert.beta_decay = pick_beta(12.0);
    cert.decay_beta_condition =
        12.0 * p_exp * (p_exp - 1.0) * p.C_chi * p.C_chi <= cert.beta_decay * cert.beta_decay * (1.0 + 1e-14);
    cert.decay_chi_smallness = cert.chi_smallness;
    cert.decay_beta_smallness = c2 <= (p_exp - 1.0) / (192.0 * p_exp * cert.beta_decay * cert.beta_decay);

    cert.weighted_potential = weighted_potential_sup(p.potential);
    return cert;
}

}  // namespace chemoflow
