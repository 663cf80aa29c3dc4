#pragma once

// Time-integrated weak-form identities of the chemotaxis-fluid system tested
// against smooth compactly supported test functions.
//
// For a test function phi(x, t) that vanishes at t = T:
//   n:  int_0^T int n (phi_t + lap phi + u.grad phi + chi(c) grad c.grad phi - grad Phi.grad phi)
//         + int n0 phi(., 0) = 0
//   c:  int_0^T int c (psi_t + lap psi + u.grad psi) - n f(c) psi + int c0 psi(., 0) = 0
//   u:  int_0^T int u.(Psi_t + lap Psi) + kappa (u (x) u):grad Psi + (-n grad Phi + chi n grad c).Psi
//         + int u0.Psi(., 0) = 0      (Psi solenoidal)
// where Phi is the potential. Time integrals use the trapezoidal rule over the
// stored snapshots with Gregory end corrections (through second differences)
// wherever the three end samples are equally spaced.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/integrator.hpp"
#include "chemoflow/random.hpp"

namespace chemoflow {

/// phi(x, t) = bump(|x - centre| / radius) * cutoff(t). The temporal cutoff is
/// 1 on [0, t_on], decreases smoothly and vanishes from t_off on. The vector
/// variant is the Leray projection of bump * direction.
struct TestFunction {
    std::array<double, 3> centre{0.0, 0.0, 0.0};  // relative to the box centre
    double radius = 1.0;
    double t_on = 0.0;
    double t_off = 1.0;
    std::array<double, 3> direction{1.0, 0.0, 0.0};
};

namespace detail {

inline double smooth_psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
inline double smooth_psi_deriv(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

/// Value and time derivative of the temporal cutoff.
inline std::pair<double, double> temporal_cutoff(const TestFunction& tf, double t) {
    if (t <= tf.t_on) return {1.0, 0.0};
    if (t >= tf.t_off) return {0.0, 0.0};
    const double w = tf.t_off - tf.t_on;
    const double x = 1.0 - (t - tf.t_on) / w;  // 1 at t_on, 0 at t_off
    const double a = smooth_psi(x), b = smooth_psi(1.0 - x);
    const double s = a / (a + b);
    const double ds = (smooth_psi_deriv(x) * b + a * smooth_psi_deriv(1.0 - x)) / ((a + b) * (a + b));
    return {s, -ds / w};
}

/// Spatial bump with analytic gradient and laplacian on the grid.
struct SpatialBump {
    RealField value;
    VectorField grad;
    RealField lap;
};

inline SpatialBump make_bump(const GridPtr& g, const TestFunction& tf) {
    SpatialBump b{RealField(g), VectorField(g), RealField(g)};
    const double R2 = tf.radius * tf.radius;
    for (std::size_t i = 0; i < g->size(); ++i) {
        auto x = g->centered_position(i);
        std::array<double, 3> dx{0.0, 0.0, 0.0};
        double r2 = 0.0;
        for (int a = 0; a < g->dim; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            dx[ua] = x[ua] - tf.centre[ua];
            r2 += dx[ua] * dx[ua];
        }
        const double s = r2 / R2;
        if (s >= 1.0) continue;
        // g(s) = exp(1 - 1/(1-s)); derivatives with respect to s.
        const double q = 1.0 - s;
        const double gv = std::exp(1.0 - 1.0 / q);
        const double g1 = -gv / (q * q);
        const double g2 = gv * (1.0 / (q * q * q * q) - 2.0 / (q * q * q));
        b.value.values[i] = gv;
        for (int a = 0; a < g->dim; ++a)
            b.grad[static_cast<std::size_t>(a)].values[i] = g1 * 2.0 * dx[static_cast<std::size_t>(a)] / R2;
        b.lap.values[i] = g2 * 4.0 * r2 / (R2 * R2) + g1 * 2.0 * g->dim / R2;
    }
    return b;
}

}  // namespace detail

struct WeakResidual {
    double n = 0.0;  // |identity| / largest constituent term
    double c = 0.0;
    double u = 0.0;

    [[nodiscard]] double max() const { return std::max({n, c, u}); }
};

/// Streaming evaluation: feed every state of a trajectory in time order, then call finish().
class WeakResidualAccumulator {
public:
    WeakResidualAccumulator(const GridPtr& g, const ModelParams& p, TestFunction tf) : params_(p), tf_(tf) {
        bump_ = detail::make_bump(g, tf_);
        VectorField psi(g);
        for (std::size_t a = 0; a < static_cast<std::size_t>(g->dim); ++a) {
            psi[a] = bump_.value;
            psi[a] *= tf_.direction[a];
        }
        auto P = to_spectral(psi);
        leray_project_inplace(P);
        vec_ = to_real(P);
        vec_grad_.clear();
        for (const auto& comp : P) vec_grad_.push_back(to_real(spectral_gradient(comp)));
        for (auto& comp : P) spectral_laplacian_inplace(comp);
        vec_lap_ = to_real(P);
    }

    void add(const State& s) {
        auto [theta, dtheta] = detail::temporal_cutoff(tf_, s.t);
        const Grid& g = *s.grid();
        const std::size_t d = static_cast<std::size_t>(g.dim);
        const auto grad_c = to_real(spectral_gradient(to_spectral(s.c)));
        const auto chi = eval_law(params_.chi, s.c);
        const auto fc = eval_law(params_.f, s.c);
        const auto& gphi = params_.potential.grad_phi;
        const bool has_pot = !params_.potential.is_zero();

        std::array<std::vector<double>, kTerms> t;
        for (auto& v : t) v.assign(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double n = s.n.values[i], c = s.c.values[i];
            double u_gb = 0.0, gc_gb = 0.0, gp_gb = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                const double gb = bump_.grad[a].values[i];
                u_gb += s.u[a].values[i] * gb;
                gc_gb += grad_c[a].values[i] * gb;
                if (has_pot) gp_gb += gphi[a].values[i] * gb;
            }
            // n identity
            t[0][i] = n * dtheta * bump_.value.values[i];
            t[1][i] = n * theta * bump_.lap.values[i];
            t[2][i] = n * theta * u_gb;
            t[3][i] = n * theta * chi.values[i] * gc_gb;
            t[4][i] = -n * theta * gp_gb;
            // c identity
            t[5][i] = c * dtheta * bump_.value.values[i];
            t[6][i] = c * theta * bump_.lap.values[i];
            t[7][i] = c * theta * u_gb;
            t[8][i] = -n * fc.values[i] * theta * bump_.value.values[i];
            // u identity
            double ut = 0.0, ul = 0.0, conv = 0.0, fpot = 0.0, fchem = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                const double ua = s.u[a].values[i];
                ut += ua * vec_[a].values[i];
                ul += ua * vec_lap_[a].values[i];
                for (std::size_t b = 0; b < d; ++b) conv += ua * s.u[b].values[i] * vec_grad_[a][b].values[i];
                if (has_pot) fpot -= n * gphi[a].values[i] * vec_[a].values[i];
                fchem += chi.values[i] * n * grad_c[a].values[i] * vec_[a].values[i];
            }
            t[9][i] = ut * dtheta;
            t[10][i] = ul * theta;
            t[11][i] = params_.kappa * conv * theta;
            t[12][i] = (fpot + fchem) * theta;
        }
        std::array<double, kTerms> now{};
        for (std::size_t k = 0; k < kTerms; ++k) now[k] = pairwise_sum(t[k]) * g.cell_volume();

        if (!started_) {
            start_t_ = s.t;
            // initial-data terms: int n0 phi(0), int c0 psi(0), int u0.Psi(0)
            std::vector<double> a(g.size()), b(g.size()), c(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                a[i] = s.n.values[i] * theta * bump_.value.values[i];
                b[i] = s.c.values[i] * theta * bump_.value.values[i];
                for (std::size_t k = 0; k < d; ++k) c[i] += s.u[k].values[i] * theta * vec_[k].values[i];
            }
            initial_ = {pairwise_sum(a) * g.cell_volume(), pairwise_sum(b) * g.cell_volume(),
                        pairwise_sum(c) * g.cell_volume()};
            started_ = true;
        } else {
            const double dt = s.t - last_t_;
            for (std::size_t k = 0; k < kTerms; ++k) integral_[k] += 0.5 * dt * (last_[k] + now[k]);
        }
        if (head_.size() < 3) head_.push_back({s.t, now});
        tail_.push_back({s.t, now});
        if (tail_.size() > 3) tail_.erase(tail_.begin());
        last_ = now;
        last_t_ = s.t;
    }

    [[nodiscard]] WeakResidual finish() const {
        if (!started_) throw Error("weak residual needs at least one state");
        if (start_t_ > 0.0 || last_t_ < tf_.t_off)
            throw ConfigError("test function support exceeds the trajectory span");
        auto integral = integral_;
        const bool long_enough = tail_.size() == 3 && tail_.front().first > head_.back().first;
        if (long_enough && uniform(head_)) {
            const double h = head_[1].first - head_[0].first;
            for (std::size_t k = 0; k < kTerms; ++k) {
                const double d1 = head_[1].second[k] - head_[0].second[k];
                const double d2 = head_[2].second[k] - 2.0 * head_[1].second[k] + head_[0].second[k];
                integral[k] += h / 12.0 * d1 - h / 24.0 * d2;
            }
        }
        if (long_enough && uniform(tail_)) {
            const double h = tail_[2].first - tail_[1].first;
            for (std::size_t k = 0; k < kTerms; ++k) {
                const double d1 = tail_[2].second[k] - tail_[1].second[k];
                const double d2 = tail_[2].second[k] - 2.0 * tail_[1].second[k] + tail_[0].second[k];
                integral[k] += -h / 12.0 * d1 - h / 24.0 * d2;
            }
        }
        auto normalized = [&](std::size_t first, std::size_t last, double init) {
            double sum = init, scale = std::abs(init);
            for (std::size_t k = first; k < last; ++k) {
                sum += integral[k];
                scale = std::max(scale, std::abs(integral[k]));
            }
            return scale > 0.0 ? std::abs(sum) / scale : 0.0;
        };
        return WeakResidual{normalized(0, 5, initial_[0]), normalized(5, 9, initial_[1]), normalized(9, 13, initial_[2])};
    }

private:
    static constexpr std::size_t kTerms = 13;
    using Sample = std::pair<double, std::array<double, kTerms>>;

    static bool uniform(const std::vector<Sample>& w) {
        const double h0 = w[1].first - w[0].first, h1 = w[2].first - w[1].first;
        return std::abs(h1 - h0) <= 1e-9 * std::max(h0, h1);
    }

    ModelParams params_;
    TestFunction tf_;
    detail::SpatialBump bump_;
    VectorField vec_;
    std::vector<VectorField> vec_grad_;  // vec_grad_[a][b] = d_b Psi_a
    VectorField vec_lap_;
    std::array<double, kTerms> integral_{};
    std::array<double, kTerms> last_{};
    std::array<double, 3> initial_{};
    std::vector<Sample> head_;  // first three samples
    std::vector<Sample> tail_;  // last three samples
    double start_t_ = 0.0;
    double last_t_ = 0.0;
    bool started_ = false;
};

inline std::vector<WeakResidual> weak_residual(const Trajectory& traj, const ModelParams& p,
                                               const std::vector<TestFunction>& test_fns) {
    if (traj.snapshots.empty()) throw Error("weak residual needs a trajectory with snapshots");
    const double t_last = traj.snapshots.back().t;
    std::vector<WeakResidual> out;
    for (const auto& tf : test_fns) {
        if (tf.t_off > t_last || traj.snapshots.front().t > 0.0)
            throw ConfigError("test function support exceeds the trajectory span");
        WeakResidualAccumulator acc(traj.snapshots.front().grid(), p, tf);
        for (const auto& s : traj.snapshots) acc.add(s);
        out.push_back(acc.finish());
    }
    return out;
}

/// Admissible random test functions for a trajectory on [0, T]: supports well
/// inside the box, temporal cutoff ending before T.
inline std::vector<TestFunction> random_test_functions(const Grid& g, double T, int count, std::uint64_t seed) {
    NormalSource rng(seed);
    std::vector<TestFunction> out;
    for (int k = 0; k < count; ++k) {
        TestFunction tf;
        // |centre| <= L/20 and radius <= 0.4 L keep the support off the box faces;
        // radius >= 0.3 L keeps the bump resolved on the grid.
        for (int a = 0; a < g.dim; ++a) tf.centre[static_cast<std::size_t>(a)] = (rng.uniform() - 0.5) * g.length / 10.0;
        tf.radius = g.length * (0.3 + 0.1 * rng.uniform());
        tf.t_on = T * (0.1 + 0.3 * rng.uniform());
        tf.t_off = T * (0.6 + 0.35 * rng.uniform());
        double norm = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            tf.direction[static_cast<std::size_t>(a)] = rng();
            norm += tf.direction[static_cast<std::size_t>(a)] * tf.direction[static_cast<std::size_t>(a)];
        }
        for (auto& x : tf.direction) x /= std::sqrt(norm);
        out.push_back(tf);
    }
    return out;
}

}  // namespace chemoflow
