#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemoflow/grid.hpp"
#include "chemoflow/model.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Norms and functionals of a single state

/// (sum |f|^p h^d)^(1/p); p = infinity gives max |f|.
inline double lp_norm(const RealField& f, double p) {
    if (std::isnan(p) || p < 1.0) throw ConfigError("lp_norm requires p >= 1");
    if (std::isinf(p)) return max_abs(f);
    std::vector<double> terms(f.size());
    if (p == 1.0) {
        for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::abs(f.values[i]);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f.values[i] * f.values[i];
    } else {
        for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::pow(std::abs(f.values[i]), p);
    }
    const double s = pairwise_sum(terms) * f.grid->cell_volume();
    return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

/// Pointwise Euclidean magnitude of a vector field.
inline RealField magnitude(const VectorField& v) {
    RealField out(v.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (const auto& c : v.components) s += c.values[i] * c.values[i];
        out.values[i] = std::sqrt(s);
    }
    return out;
}

inline double integral(const RealField& f) { return pairwise_sum(f.values) * f.grid->cell_volume(); }

inline double field_min(const RealField& f) {
    double m = kInf;
    for (double x : f.values) m = std::min(m, x);
    return m;
}

inline double field_max(const RealField& f) {
    double m = -kInf;
    for (double x : f.values) m = std::max(m, x);
    return m;
}

struct EntropyPair {
    double entropy = 0.0;
    double dissipation = 0.0;
};

/// entropy     = int n|ln n| + ||grad c||^2 + ||u||^2
/// dissipation = int |grad n|^2/(n + delta) + ||grad^2 c||^2 + ||grad u||^2
/// with x|ln x| := 0 for x <= 0 and delta = 1e-12 max n.
inline EntropyPair entropy_functional(const State& s) {
    const Grid& g = *s.grid();
    const double dv = g.cell_volume();
    EntropyPair out;

    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double n = s.n.values[i];
        terms[i] = n > 0.0 ? n * std::abs(std::log(n)) : 0.0;
    }
    const double nlogn = pairwise_sum(terms) * dv;

    const auto C = to_spectral(s.c);
    const auto U = to_spectral(s.u);
    double u2 = 0.0, grad_u2 = 0.0;
    for (const auto& comp : U) {
        u2 += spectral_l2_squared(comp);
        grad_u2 += spectral_sobolev_squared(comp, 1);
    }
    out.entropy = nlogn + spectral_sobolev_squared(C, 1) + u2;

    const double nmax = field_max(s.n);
    double fisher = 0.0;
    if (nmax > 0.0) {
        const double delta = 1e-12 * nmax;
        const auto grad_n = to_real(spectral_gradient(to_spectral(s.n)));
        for (std::size_t i = 0; i < g.size(); ++i) {
            double gn2 = 0.0;
            for (const auto& comp : grad_n.components) gn2 += comp.values[i] * comp.values[i];
            terms[i] = gn2 / (std::max(s.n.values[i], 0.0) + delta);
        }
        fisher = pairwise_sum(terms) * dv;
    }
    out.dissipation = fisher + spectral_sobolev_squared(C, 2) + grad_u2;
    return out;
}

/// Largest admissible beta*c before exp((beta c)^2) is treated as overflow.
inline constexpr double kWeightedExponentCap = 25.0;

/// int n^p exp((beta c)^2) h^d.
inline double weighted_lp_functional(const State& s, double p, double beta) {
    if (!(p > 1.0)) throw ConfigError("weighted L^p functional requires p > 1");
    if (!(beta > 0.0)) throw ConfigError("weighted L^p functional requires beta > 0");
    std::vector<double> terms(s.n.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double bc = beta * std::max(s.c.values[i], 0.0);
        if (bc > kWeightedExponentCap)
            throw Error("weighted L^p functional overflow: beta*c = " + std::to_string(bc) +
                        " exceeds 25; the signal is far outside the small-||c0||_inf regime");
        terms[i] = std::pow(std::abs(s.n.values[i]), p) * std::exp(bc * bc);
    }
    return pairwise_sum(terms) * s.grid()->cell_volume();
}

/// int n <x> h^d with <x> = sqrt(1 + |x - centre|^2).
inline double first_moment(const State& s) {
    const Grid& g = *s.grid();
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto x = g.centered_position(i);
        terms[i] = s.n.values[i] * std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    return pairwise_sum(terms) * g.cell_volume();
}

// ---------------------------------------------------------------------------
// Serrin-type space-time integrals

struct SerrinPair {
    double r = 4.0;
    double s = 4.0;

    friend bool operator==(const SerrinPair&, const SerrinPair&) = default;
};

/// Scaling condition d/r + 2/s <= 1 with d < r <= infinity.
inline bool serrin_admissible(int dim, SerrinPair pair) {
    if (!(pair.s > 0.0) || std::isnan(pair.r)) return false;
    if (!(pair.r > dim)) return false;
    const double lhs = (std::isinf(pair.r) ? 0.0 : dim / pair.r) + 2.0 / pair.s;
    return lhs <= 1.0 + 1e-15;
}

inline void require_serrin_admissible(int dim, SerrinPair pair) {
    if (!serrin_admissible(dim, pair)) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "inadmissible Serrin pair (r, s) = (%g, %g) in %dD: the scaling condition "
                      "%d/r + 2/s <= 1 with r > %d requires %d/r + 2/s = %g <= 1",
                      pair.r, pair.s, dim, dim, dim, dim,
                      (std::isinf(pair.r) ? 0.0 : dim / pair.r) + 2.0 / pair.s);
        throw ConfigError(buf);
    }
}

inline std::vector<SerrinPair> default_serrin_pairs(int dim) {
    return dim == 3 ? std::vector<SerrinPair>{{5.0, 5.0}} : std::vector<SerrinPair>{{4.0, 4.0}};
}

/// ||grad c||_{L^r}^s, plus ||u||_{L^r}^s in 3D when kappa != 0.
inline double serrin_integrand(const State& s, const ModelParams& p, SerrinPair pair) {
    const auto grad_c = to_real(spectral_gradient(to_spectral(s.c)));
    double v = std::pow(lp_norm(magnitude(grad_c), pair.r), pair.s);
    if (s.grid()->dim == 3 && p.kappa != 0.0) v += std::pow(lp_norm(magnitude(s.u), pair.r), pair.s);
    return v;
}

// ---------------------------------------------------------------------------
// Diagnostics rows

struct DiagnosticsConfig {
    std::vector<double> p_list{1.0, 2.0, 4.0};
    std::vector<SerrinPair> serrin_pairs;  // empty: dimension default
    std::optional<double> beta;            // empty: per-p equality-case beta
    int snapshot_every = 0;                // 0: initial and final state only
};

/// Column layout shared by every row of one run.
struct DiagnosticsSchema {
    int dim = 2;
    std::vector<double> p_list;      // finite p >= 1; an L^inf entry is always appended
    std::vector<double> weighted_p;  // the entries of p_list with p > 1
    std::vector<double> betas;       // one per weighted_p
    std::vector<SerrinPair> serrin_pairs;

    [[nodiscard]] std::vector<std::string> column_names() const;
};

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    std::vector<double> lp_n;  // p_list entries then L^inf
    std::vector<double> lp_c;
    double grad_c_l2sq = 0.0;
    double u_l2sq = 0.0;
    double entropy = 0.0;
    double dissipation = 0.0;
    double entropy_budget = 0.0;  // entropy(t) + 1/2 int_0^t dissipation
    std::vector<double> weighted_lp;
    std::vector<double> serrin;
    double first_moment = 0.0;
    double min_n = 0.0;
    double min_c = 0.0;
    bool validity_flag = false;  // set once t > T_valid

    // Not written to CSV: integrand values at t, used by the trapezoidal folds.
    std::vector<double> serrin_rate;

    [[nodiscard]] std::vector<double> values() const;
};

namespace detail {

inline std::string format_p(double p) {
    if (std::isinf(p)) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

}  // namespace detail

inline std::vector<std::string> DiagnosticsSchema::column_names() const {
    std::vector<std::string> cols{"t", "mass"};
    for (double p : p_list) cols.push_back("lp_n_" + detail::format_p(p));
    cols.emplace_back("lp_n_inf");
    for (double p : p_list) cols.push_back("lp_c_" + detail::format_p(p));
    cols.emplace_back("lp_c_inf");
    for (const char* c : {"grad_c_l2sq", "u_l2sq", "entropy", "dissipation", "entropy_budget"}) cols.emplace_back(c);
    for (double p : weighted_p) cols.push_back("weighted_lp_" + detail::format_p(p));
    for (const auto& sp : serrin_pairs)
        cols.push_back("serrin_" + detail::format_p(sp.r) + "_" + detail::format_p(sp.s));
    for (const char* c : {"first_moment", "min_n", "min_c", "validity_flag"}) cols.emplace_back(c);
    return cols;
}

inline std::vector<double> DiagnosticsRow::values() const {
    std::vector<double> v{t, mass};
    v.insert(v.end(), lp_n.begin(), lp_n.end());
    v.insert(v.end(), lp_c.begin(), lp_c.end());
    for (double x : {grad_c_l2sq, u_l2sq, entropy, dissipation, entropy_budget}) v.push_back(x);
    v.insert(v.end(), weighted_lp.begin(), weighted_lp.end());
    v.insert(v.end(), serrin.begin(), serrin.end());
    for (double x : {first_moment, min_n, min_c, validity_flag ? 1.0 : 0.0}) v.push_back(x);
    return v;
}

inline DiagnosticsSchema make_schema(const DiagnosticsConfig& cfg, const ModelParams& p, int dim) {
    DiagnosticsSchema sc;
    sc.dim = dim;
    for (double q : cfg.p_list) {
        if (std::isnan(q) || q < 1.0) throw ConfigError("diagnostic exponent p must be >= 1");
        if (std::isinf(q)) continue;
        sc.p_list.push_back(q);
        if (q > 1.0) {
            sc.weighted_p.push_back(q);
            double b = cfg.beta.value_or(std::sqrt(9.0 * q * (q - 1.0)) * p.C_chi);
            sc.betas.push_back(b > 0.0 ? b : 1.0);
        }
    }
    sc.serrin_pairs = cfg.serrin_pairs.empty() ? default_serrin_pairs(dim) : cfg.serrin_pairs;
    for (const auto& sp : sc.serrin_pairs) require_serrin_admissible(dim, sp);
    return sc;
}

/// Trapezoidal update of the Serrin accumulators from the previous row to state s.
inline std::pair<std::vector<double>, std::vector<double>> serrin_accumulate(
    const DiagnosticsRow& prev, const State& s, const ModelParams& p, const std::vector<SerrinPair>& pairs) {
    std::vector<double> acc(pairs.size()), rate(pairs.size());
    const double dt = s.t - prev.t;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        rate[j] = serrin_integrand(s, p, pairs[j]);
        acc[j] = prev.serrin[j] + 0.5 * dt * (prev.serrin_rate[j] + rate[j]);
    }
    return {acc, rate};
}

/// Evaluates every functional of one state. prev = nullptr starts the folds at zero.
inline DiagnosticsRow compute_row(const State& s, const ModelParams& p, const DiagnosticsSchema& sc,
                                  const DiagnosticsRow* prev, double t_valid) {
    DiagnosticsRow row;
    row.t = s.t;
    row.mass = integral(s.n);
    for (double q : sc.p_list) row.lp_n.push_back(lp_norm(s.n, q));
    row.lp_n.push_back(lp_norm(s.n, kInf));
    for (double q : sc.p_list) row.lp_c.push_back(lp_norm(s.c, q));
    row.lp_c.push_back(lp_norm(s.c, kInf));

    const auto C = to_spectral(s.c);
    row.grad_c_l2sq = spectral_sobolev_squared(C, 1);
    row.u_l2sq = 0.0;
    for (const auto& comp : s.u.components) row.u_l2sq += spectral_l2_squared(to_spectral(comp));

    const auto ent = entropy_functional(s);
    row.entropy = ent.entropy;
    row.dissipation = ent.dissipation;
    const double diss_integral =
        prev ? (prev->entropy_budget - prev->entropy) + 0.25 * (s.t - prev->t) * (prev->dissipation + ent.dissipation)
             : 0.0;
    row.entropy_budget = ent.entropy + diss_integral;

    for (std::size_t j = 0; j < sc.weighted_p.size(); ++j)
        row.weighted_lp.push_back(weighted_lp_functional(s, sc.weighted_p[j], sc.betas[j]));

    if (prev) {
        auto [acc, rate] = serrin_accumulate(*prev, s, p, sc.serrin_pairs);
        row.serrin = std::move(acc);
        row.serrin_rate = std::move(rate);
    } else {
        row.serrin.assign(sc.serrin_pairs.size(), 0.0);
        for (const auto& sp : sc.serrin_pairs) row.serrin_rate.push_back(serrin_integrand(s, p, sp));
    }

    row.first_moment = first_moment(s);
    row.min_n = field_min(s.n);
    row.min_c = field_min(s.c);
    row.validity_flag = s.t > t_valid;
    return row;
}

// ---------------------------------------------------------------------------
// Decay fits

struct DecayFit {
    std::string quantity;
    double t0 = 0.0;
    double t1 = 0.0;
    double exponent = 0.0;
    double reference = 0.0;
    double deviation = 0.0;  // |exponent - reference| / |reference|
    double r_squared = 0.0;
    std::size_t samples = 0;
};

inline constexpr std::size_t kMinFitSamples = 10;

/// Least-squares slope of ln(value) against ln(1 + t) over [t0, t1].
inline DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double t0, double t1,
                          double reference, std::string quantity = "") {
    if (!(t0 < t1)) throw ConfigError("decay fit window requires t0 < t1");
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t < t0 || t > t1) continue;
        if (!(v > 0.0)) throw Error("decay fit undefined: nonpositive value at t = " + std::to_string(t));
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    if (xs.size() < kMinFitSamples)
        throw Error("decay fit needs at least 10 samples in the window, got " + std::to_string(xs.size()));

    const double m = static_cast<double>(xs.size());
    const double mx = pairwise_sum(xs) / m;
    const double my = pairwise_sum(ys) / m;
    std::vector<double> sxy(xs.size()), sxx(xs.size()), syy(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy[i] = (xs[i] - mx) * (ys[i] - my);
        sxx[i] = (xs[i] - mx) * (xs[i] - mx);
        syy[i] = (ys[i] - my) * (ys[i] - my);
    }
    const double Sxy = pairwise_sum(sxy), Sxx = pairwise_sum(sxx), Syy = pairwise_sum(syy);
    if (Sxx == 0.0) throw Error("decay fit window has no spread in time");

    DecayFit fit;
    fit.quantity = std::move(quantity);
    fit.t0 = t0;
    fit.t1 = t1;
    fit.exponent = Sxy / Sxx;
    fit.reference = reference;
    fit.deviation = reference != 0.0 ? std::abs(fit.exponent - reference) / std::abs(reference)
                                     : std::abs(fit.exponent);
    fit.r_squared = Syy == 0.0 ? 1.0 : (Sxy * Sxy) / (Sxx * Syy);
    fit.samples = xs.size();
    return fit;
}

}  // namespace chemoflow
