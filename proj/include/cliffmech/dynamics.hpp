#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliffmech/errors.hpp"
#include "cliffmech/expression.hpp"
#include "cliffmech/forms.hpp"
#include "cliffmech/linalg.hpp"

// Hamiltonian dynamics against a constant symplectic form: the vector field
// solving i_X Phi = dH, the per-structure equation sets read off from the
// form, fixed-step integrators (classical RK4 and implicit midpoint) and the
// conservation diagnostics. Everything here runs in doubles; exactness stops
// at the ConstantTwoForm boundary.

namespace cliffmech {

enum class GradientMode { symbolic, finite_difference };

/// Dimension plus evaluators for the energy and its gradient.
struct HamiltonianSystem {
    int dimension = 0;
    std::function<double(const std::vector<double>&)> energy;
    std::function<std::vector<double>(const std::vector<double>&)> gradient;
    GradientMode provenance = GradientMode::symbolic;
};

struct PhasePoint {
    std::vector<double> coordinates;
    double time = 0.0;
};

enum class Method { rk4, implicit_midpoint };

inline const char* to_string(Method m) {
    return m == Method::rk4 ? "rk4" : "implicit_midpoint";
}

struct IntegratorConfig {
    Method method = Method::implicit_midpoint;
    double dt = 1e-3;
    long steps = 0;
    double midpoint_tolerance = 1e-12;
    int midpoint_max_iterations = 50;
};

/// Phase points at uniform spacing dt with the energy recorded at each one.
struct Trajectory {
    std::vector<PhasePoint> points;
    std::vector<double> energy;
    Method method = Method::rk4;
    double dt = 0.0;
};

/// dx_{lhs}/dt = sign * dH/dx_{rhs}, one record per block.
struct EquationRecord {
    int lhs_block;
    int sign;
    int rhs_block;

    friend bool operator==(const EquationRecord&, const EquationRecord&) = default;
};

struct EquationSet {
    int k = 0;
    std::vector<EquationRecord> records;  // exactly 8, lhs blocks 0..7 in order

    friend bool operator==(const EquationSet&, const EquationSet&) = default;
};

/// Double-precision view of a ConstantTwoForm with its square-is-minus-identity
/// property decided exactly on the rational matrix.
class TwoFormOperator {
public:
    explicit TwoFormOperator(const ConstantTwoForm& form)
        : omega_(form.dimension(), form.dimension()) {
        const int dim = form.dimension();
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) omega_(a, b) = form.at(a, b).to_double();
        minus_identity_square_ = square_is_minus_identity(form);
        degenerate_ = !minus_identity_square_ && !check_nondegenerate(form);
    }

    const Matrix& omega() const noexcept { return omega_; }
    bool squares_to_minus_identity() const noexcept { return minus_identity_square_; }
    bool degenerate() const noexcept { return degenerate_; }

    /// Vector field with gradient g: the unique X with Sum_a X[a] Omega[a][b] = g[b].
    std::vector<double> field(const std::vector<double>& g) const {
        if (degenerate_) throw singular_system_error("two-form is degenerate");
        if (minus_identity_square_) return omega_.apply(g);
        return lu_solve(omega_.transposed(), g);
    }

private:
    static bool square_is_minus_identity(const ConstantTwoForm& form) {
        const int dim = form.dimension();
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                Rational acc(0);
                for (int c = 0; c < dim; ++c) {
                    if (!form.at(a, c).is_zero() && !form.at(c, b).is_zero())
                        acc += form.at(a, c) * form.at(c, b);
                }
                if (acc != Rational(a == b ? -1 : 0)) return false;
            }
        }
        return true;
    }

    Matrix omega_;
    bool minus_identity_square_ = false;
    bool degenerate_ = false;
};

/// Solves i_X Phi = dH at one point: the linear system Sum_a X[a] Omega[a][b]
/// = dH/dx_b. When Omega^2 = -identity the closed form X = Omega * gradH must
/// agree with the solve to 1e-12 per component; disagreement is an internal
/// inconsistency and throws.
inline std::vector<double> hamilton_vector_field(const ConstantTwoForm& form,
                                                 const HamiltonianSystem& sys,
                                                 const PhasePoint& x) {
    if (form.dimension() != sys.dimension ||
        x.coordinates.size() != static_cast<std::size_t>(sys.dimension))
        throw std::invalid_argument("hamilton_vector_field: dimension mismatch");
    TwoFormOperator op(form);
    if (op.degenerate()) throw singular_system_error("hamilton_vector_field: degenerate form");
    const std::vector<double> grad = sys.gradient(x.coordinates);
    const std::vector<double> solved = lu_solve(op.omega().transposed(), grad);
    if (op.squares_to_minus_identity()) {
        const std::vector<double> closed = op.omega().apply(grad);
        for (std::size_t a = 0; a < solved.size(); ++a) {
            if (std::abs(solved[a] - closed[a]) > 1e-12)
                throw std::logic_error("hamilton_vector_field: solve/closed-form disagreement");
        }
    }
    return solved;
}

/// Reads the signed block permutation off the symplectic form of structure k
/// at n = 1: row b of Omega holds a single +-1 at column b', giving
/// dx_b/dt = sign * dH/dx_{b'}.
inline EquationSet symbolic_equations(int k) {
    const ConstantTwoForm phi = symplectic_form_of_structure(k, 1);
    EquationSet set;
    set.k = k;
    std::vector<char> used(8, 0);
    for (int b = 0; b < 8; ++b) {
        int rhs = -1;
        int sign = 0;
        for (int c = 0; c < 8; ++c) {
            const Rational& v = phi.at(b, c);
            if (v.is_zero()) continue;
            if (rhs >= 0 || (v != Rational(1) && v != Rational(-1)))
                throw std::logic_error("symbolic_equations: form row is not a signed unit");
            rhs = c;
            sign = v == Rational(1) ? 1 : -1;
        }
        if (rhs < 0 || used[rhs]) throw std::logic_error("symbolic_equations: block map not bijective");
        used[rhs] = 1;
        set.records.push_back({b, sign, rhs});
    }
    return set;
}

namespace detail {

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline void validate_config(const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
        throw std::invalid_argument("IntegratorConfig: dt must be > 0");
    if (cfg.steps < 0) throw std::invalid_argument("IntegratorConfig: steps must be >= 0");
    if (!(cfg.midpoint_tolerance > 0.0))
        throw std::invalid_argument("IntegratorConfig: tolerance must be > 0");
    if (cfg.midpoint_max_iterations < 1)
        throw std::invalid_argument("IntegratorConfig: max iterations must be >= 1");
}

template <typename Field>
std::vector<double> rk4_step(const Field& f, const std::vector<double>& x, double dt) {
    const std::size_t dim = x.size();
    const std::vector<double> k1 = f(x);
    std::vector<double> tmp(dim);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const std::vector<double> k2 = f(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = f(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
    const std::vector<double> k4 = f(tmp);
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    return out;
}

template <typename Field>
std::vector<double> midpoint_step(const Field& f, const std::vector<double>& x, double dt,
                                  double tol, int max_iters, std::size_t step_index) {
    const std::size_t dim = x.size();
    std::vector<double> guess = x;
    std::vector<double> mid(dim);
    for (int it = 0; it < max_iters; ++it) {
        for (std::size_t i = 0; i < dim; ++i) mid[i] = 0.5 * (x[i] + guess[i]);
        const std::vector<double> fx = f(mid);
        double update = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double next = x[i] + dt * fx[i];
            update = std::max(update, std::abs(next - guess[i]));
            guess[i] = next;
        }
        if (!all_finite(guess))
            throw integration_error(integration_error::Kind::divergence, step_index,
                                    "midpoint iterate diverged");
        if (update < tol) return guess;
    }
    throw integration_error(integration_error::Kind::non_convergence, step_index,
                            "midpoint fixed-point iteration did not converge");
}

}  // namespace detail

/// Fixed-step integration of the Hamiltonian flow against `form`, recording
/// the energy at every point. Midpoint solves its implicit stage by
/// fixed-point iteration; non-convergence and non-finite states abort with
/// the step index.
inline Trajectory integrate(const HamiltonianSystem& sys, const ConstantTwoForm& form,
                            const PhasePoint& x0, const IntegratorConfig& cfg) {
    detail::validate_config(cfg);
    if (form.dimension() != sys.dimension ||
        x0.coordinates.size() != static_cast<std::size_t>(sys.dimension))
        throw std::invalid_argument("integrate: dimension mismatch");
    if (!detail::all_finite(x0.coordinates))
        throw std::invalid_argument("integrate: initial state is not finite");

    TwoFormOperator op(form);
    if (op.degenerate()) throw singular_system_error("integrate: degenerate form");
    auto field = [&](const std::vector<double>& y) { return op.field(sys.gradient(y)); };

    Trajectory traj;
    traj.method = cfg.method;
    traj.dt = cfg.dt;
    traj.points.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    traj.energy.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    traj.points.push_back(x0);
    traj.energy.push_back(sys.energy(x0.coordinates));

    std::vector<double> x = x0.coordinates;
    for (long step = 0; step < cfg.steps; ++step) {
        if (cfg.method == Method::rk4) {
            x = detail::rk4_step(field, x, cfg.dt);
        } else {
            x = detail::midpoint_step(field, x, cfg.dt, cfg.midpoint_tolerance,
                                      cfg.midpoint_max_iterations,
                                      static_cast<std::size_t>(step));
        }
        if (!detail::all_finite(x))
            throw integration_error(integration_error::Kind::divergence,
                                    static_cast<std::size_t>(step), "state is not finite");
        PhasePoint p;
        p.coordinates = x;
        p.time = x0.time + static_cast<double>(step + 1) * cfg.dt;
        traj.points.push_back(std::move(p));
        traj.energy.push_back(sys.energy(x));
    }
    return traj;
}

/// Exact flow of H = 1/2 x^T Q x: x(t) = exp(t * Omega * Q) x0, computed by
/// the scaling-and-squaring exponential. Independent of the steppers above.
inline PhasePoint quadratic_flow_oracle(const Matrix& Q, const ConstantTwoForm& form,
                                        const PhasePoint& x0, double t) {
    const int dim = form.dimension();
    if (Q.rows() != dim || Q.cols() != dim ||
        x0.coordinates.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("quadratic_flow_oracle: dimension mismatch");
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b)
            if (std::abs(Q(a, b) - Q(b, a)) > 1e-12 * (1.0 + Q.inf_norm()))
                throw std::invalid_argument("quadratic_flow_oracle: Q is not symmetric");
    TwoFormOperator op(form);
    if (!op.squares_to_minus_identity())
        throw std::invalid_argument("quadratic_flow_oracle: form must square to -identity");
    const Matrix flow = expm(t * (op.omega() * Q));
    PhasePoint out;
    out.coordinates = flow.apply(x0.coordinates);
    out.time = x0.time + t;
    return out;
}

struct EnergyDrift {
    double max_drift = 0.0;
    double slope = 0.0;  // energy per unit time, least squares
};

/// Max |H(x_t) - H(x_0)| along the trajectory plus the least-squares slope of
/// energy against time.
inline EnergyDrift energy_drift(const Trajectory& traj) {
    if (traj.points.empty()) throw std::invalid_argument("energy_drift: empty trajectory");
    EnergyDrift out;
    const double h0 = traj.energy.front();
    for (double h : traj.energy) out.max_drift = std::max(out.max_drift, std::abs(h - h0));
    const std::size_t m = traj.points.size();
    if (m < 2) return out;
    double tbar = 0.0, hbar = 0.0;
    for (std::size_t i = 0; i < m; ++i) { tbar += traj.points[i].time; hbar += traj.energy[i]; }
    tbar /= static_cast<double>(m);
    hbar /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dt_ = traj.points[i].time - tbar;
        num += dt_ * (traj.energy[i] - hbar);
        den += dt_ * dt_;
    }
    out.slope = den > 0.0 ? num / den : 0.0;
    return out;
}

/// || M^T Omega M - Omega ||_max for the Jacobian M of the one-step map at
/// x0, by central finite differences with column perturbation h = 1e-6.
inline double symplecticity_residual(const HamiltonianSystem& sys, const ConstantTwoForm& form,
                                     const PhasePoint& x0, const IntegratorConfig& cfg) {
    const int dim = sys.dimension;
    IntegratorConfig one = cfg;
    one.steps = 1;
    const double h = 1e-6;
    Matrix M(dim, dim);
    for (int j = 0; j < dim; ++j) {
        PhasePoint plus = x0, minus = x0;
        plus.coordinates[j] += h;
        minus.coordinates[j] -= h;
        const auto fplus = integrate(sys, form, plus, one).points.back().coordinates;
        const auto fminus = integrate(sys, form, minus, one).points.back().coordinates;
        for (int i = 0; i < dim; ++i) M(i, j) = (fplus[i] - fminus[i]) / (2.0 * h);
    }
    Matrix omega(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) omega(a, b) = form.at(a, b).to_double();
    const Matrix residual = M.transposed() * omega * M - omega;
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) worst = std::max(worst, std::abs(residual(a, b)));
    return worst;
}

/// Wraps a parsed expression as a HamiltonianSystem. Symbolic mode
/// differentiates once up front; finite-difference mode uses central
/// differences with step 1e-6 * max(1, |x_a|).
inline HamiltonianSystem make_hamiltonian_system(const Expression& H, GradientMode mode) {
    HamiltonianSystem sys;
    sys.dimension = H.dimension();
    sys.provenance = mode;
    auto expr = std::make_shared<Expression>(H);
    sys.energy = [expr](const std::vector<double>& x) { return expr->evaluate(x); };
    if (mode == GradientMode::symbolic) {
        auto grads = std::make_shared<std::vector<Expression>>(H.gradient());
        sys.gradient = [grads](const std::vector<double>& x) {
            std::vector<double> g(x.size());
            for (std::size_t a = 0; a < x.size(); ++a) g[a] = (*grads)[a].evaluate(x);
            return g;
        };
    } else {
        sys.gradient = [expr](const std::vector<double>& x) {
            std::vector<double> g(x.size());
            std::vector<double> probe = x;
            for (std::size_t a = 0; a < x.size(); ++a) {
                const double h = 1e-6 * std::max(1.0, std::abs(x[a]));
                probe[a] = x[a] + h;
                const double fp = expr->evaluate(probe);
                probe[a] = x[a] - h;
                const double fm = expr->evaluate(probe);
                probe[a] = x[a];
                g[a] = (fp - fm) / (2.0 * h);
            }
            return g;
        };
    }
    return sys;
}

}  // namespace cliffmech
