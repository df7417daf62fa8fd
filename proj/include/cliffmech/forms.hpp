#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliffmech/rational.hpp"
#include "cliffmech/structure.hpp"

// Just enough exterior calculus for constant symplectic structures: 1-forms
// with coefficients affine in the coordinates, constant-coefficient 2-forms,
// the exterior derivative between them, pullback along a dual structure and
// the interior product. All coefficients are exact rationals; doubles only
// appear when a form is evaluated at a point.

namespace cliffmech {

/// Value of a constant 1-form: one double per dx_b.
struct CovectorValue {
    std::vector<double> components;
};

/// Sum_{a,b} C[a][b] x_a dx_b + Sum_b c0[b] dx_b, coefficients exact.
class LinearOneForm {
public:
    explicit LinearOneForm(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("LinearOneForm: n must be >= 1");
        const int dim = 8 * n;
        linear_.assign(static_cast<std::size_t>(dim) * dim, Rational(0));
        constant_.assign(dim, Rational(0));
    }

    int n() const noexcept { return n_; }
    int dimension() const noexcept { return 8 * n_; }

    const Rational& linear(int a, int b) const { return linear_[idx(a, b)]; }
    Rational& linear(int a, int b) { return linear_[idx(a, b)]; }
    const Rational& constant(int b) const { return constant_[b]; }
    Rational& constant(int b) { return constant_[b]; }

    /// Evaluate at a point: value[b] = Sum_a C[a][b] x_a + c0[b].
    CovectorValue evaluate(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(dimension()))
            throw std::invalid_argument("LinearOneForm::evaluate: point length != 8n");
        CovectorValue out;
        out.components.assign(dimension(), 0.0);
        for (int b = 0; b < dimension(); ++b) {
            double acc = constant_[b].to_double();
            for (int a = 0; a < dimension(); ++a) {
                if (!linear(a, b).is_zero()) acc += linear(a, b).to_double() * x[a];
            }
            out.components[b] = acc;
        }
        return out;
    }

    friend bool operator==(const LinearOneForm& f, const LinearOneForm& g) {
        return f.n_ == g.n_ && f.linear_ == g.linear_ && f.constant_ == g.constant_;
    }

private:
    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * dimension() + static_cast<std::size_t>(b);
    }

    int n_;
    std::vector<Rational> linear_;    // row a, column b: coefficient of x_a dx_b
    std::vector<Rational> constant_;  // coefficient of dx_b
};

/// Phi = 1/2 Sum_{a,b} Omega[a][b] dx_a ^ dx_b with Omega exactly
/// antisymmetric; a single dx_a ^ dx_b term contributes +1 to Omega[a][b]
/// and -1 to Omega[b][a].
class ConstantTwoForm {
public:
    explicit ConstantTwoForm(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("ConstantTwoForm: n must be >= 1");
        const int dim = 8 * n;
        omega_.assign(static_cast<std::size_t>(dim) * dim, Rational(0));
    }

    ConstantTwoForm(int n, std::vector<Rational> omega) : n_(n), omega_(std::move(omega)) {
        const int dim = 8 * n;
        if (n < 1 || omega_.size() != static_cast<std::size_t>(dim) * dim)
            throw std::invalid_argument("ConstantTwoForm: bad dimensions");
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b)
                if (at(a, b) != -at(b, a))
                    throw std::invalid_argument("ConstantTwoForm: matrix not antisymmetric");
    }

    int n() const noexcept { return n_; }
    int dimension() const noexcept { return 8 * n_; }
    const Rational& at(int a, int b) const { return omega_[idx(a, b)]; }
    const std::vector<Rational>& matrix() const noexcept { return omega_; }

    /// Adds one dx_a ^ dx_b term (scaled); keeps antisymmetry by construction.
    void add_wedge(int a, int b, const Rational& coeff) {
        if (a == b) return;
        omega_[idx(a, b)] += coeff;
        omega_[idx(b, a)] -= coeff;
    }

    std::vector<double> to_double_matrix() const {
        std::vector<double> m(omega_.size());
        for (std::size_t i = 0; i < omega_.size(); ++i) m[i] = omega_[i].to_double();
        return m;
    }

    friend bool operator==(const ConstantTwoForm& f, const ConstantTwoForm& g) {
        return f.n_ == g.n_ && f.omega_ == g.omega_;
    }

private:
    friend ConstantTwoForm exterior_derivative(const LinearOneForm&);
    friend ConstantTwoForm operator-(const ConstantTwoForm&);

    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * dimension() + static_cast<std::size_t>(b);
    }

    int n_;
    std::vector<Rational> omega_;
};

inline ConstantTwoForm operator-(const ConstantTwoForm& f) {
    ConstantTwoForm out(f.n());
    for (std::size_t i = 0; i < f.omega_.size(); ++i) out.omega_[i] = -f.omega_[i];
    return out;
}

/// omega = 1/2 Sum_a x_a dx_a.
inline LinearOneForm canonical_one_form(int n) {
    LinearOneForm f(n);
    for (int a = 0; a < f.dimension(); ++a) f.linear(a, a) = Rational::half();
    return f;
}

/// Pullback along a dual structure: every dx_b is replaced by
/// sign[b] * dx_target[b]; the x_a coefficient functions are untouched.
inline LinearOneForm apply_dual_structure(const SignedPermutationTensor& Jd,
                                          const LinearOneForm& f) {
    if (Jd.variant() != Variant::dual)
        throw std::invalid_argument("apply_dual_structure: tensor must be dual");
    if (Jd.dimension() != f.dimension())
        throw std::invalid_argument("apply_dual_structure: dimension mismatch");
    LinearOneForm out(f.n());
    const int dim = f.dimension();
    for (int b = 0; b < dim; ++b) {
        const int tb = Jd.target()[b];
        const Rational s(Jd.sign()[b]);
        for (int a = 0; a < dim; ++a) {
            if (!f.linear(a, b).is_zero()) out.linear(a, tb) += s * f.linear(a, b);
        }
        if (!f.constant(b).is_zero()) out.constant(tb) += s * f.constant(b);
    }
    return out;
}

/// d(Sum C[a][b] x_a dx_b) = Sum C[a][b] dx_a ^ dx_b; the constant part
/// contributes nothing. Antisymmetry of the result is structural.
inline ConstantTwoForm exterior_derivative(const LinearOneForm& f) {
    ConstantTwoForm out(f.n());
    const int dim = f.dimension();
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            out.omega_[static_cast<std::size_t>(a) * dim + b] = f.linear(a, b) - f.linear(b, a);
    return out;
}

/// Liouville form of structure k: lambda = J_k*(omega).
inline LinearOneForm liouville_form(int k, int n) {
    return apply_dual_structure(build_structure(k, n, Variant::dual), canonical_one_form(n));
}

/// Symplectic form of structure k: Phi = -d(J_k*(omega)).
inline ConstantTwoForm symplectic_form_of_structure(int k, int n) {
    if (k < 1 || k > 6) throw std::invalid_argument("symplectic_form_of_structure: k in 1..6");
    return -exterior_derivative(liouville_form(k, n));
}

/// Interior product i_X Phi as a covector: components[b] = Sum_a X[a] Omega[a][b].
inline CovectorValue interior_product(const ConstantTwoForm& form, const std::vector<double>& X) {
    if (X.size() != static_cast<std::size_t>(form.dimension()))
        throw std::invalid_argument("interior_product: vector length != 8n");
    CovectorValue out;
    const int dim = form.dimension();
    out.components.assign(dim, 0.0);
    for (int b = 0; b < dim; ++b) {
        double acc = 0.0;
        for (int a = 0; a < dim; ++a) {
            if (!form.at(a, b).is_zero()) acc += X[a] * form.at(a, b).to_double();
        }
        out.components[b] = acc;
    }
    return out;
}

/// Exact overload used by the derivation checks.
inline std::vector<Rational> interior_product(const ConstantTwoForm& form,
                                              const std::vector<Rational>& X) {
    if (X.size() != static_cast<std::size_t>(form.dimension()))
        throw std::invalid_argument("interior_product: vector length != 8n");
    const int dim = form.dimension();
    std::vector<Rational> out(dim, Rational(0));
    for (int b = 0; b < dim; ++b)
        for (int a = 0; a < dim; ++a)
            if (!form.at(a, b).is_zero()) out[b] += X[a] * form.at(a, b);
    return out;
}

/// Fundamental 2-form of a primal structure: Omega[a][b] = g(J e_a, e_b).
/// Antisymmetric whenever J is g-orthogonal with J^2 = -identity; violating
/// inputs are rejected by the ConstantTwoForm invariant.
inline ConstantTwoForm fundamental_two_form(const SignedPermutationTensor& J, const Metric& g) {
    if (J.variant() != Variant::primal)
        throw std::invalid_argument("fundamental_two_form: tensor must be primal");
    if (g.dimension() != J.dimension())
        throw std::invalid_argument("fundamental_two_form: metric dimension mismatch");
    const int dim = J.dimension();
    std::vector<Rational> omega(static_cast<std::size_t>(dim) * dim, Rational(0));
    for (int a = 0; a < dim; ++a) {
        const Rational s(J.sign()[a]);
        for (int b = 0; b < dim; ++b) {
            const Rational v = s * g.at(J.target()[a], b);
            omega[static_cast<std::size_t>(a) * dim + b] = v;
        }
    }
    return ConstantTwoForm(J.n(), std::move(omega));
}

/// Equality of matrix(Phi_{J_k*}) with matrix(J_k), entry for entry.
inline VerificationRecord structure_form_identity(int k, int n) {
    const auto phi = symplectic_form_of_structure(k, n);
    const auto J = build_structure(k, n, Variant::primal);
    const auto m = matrix_of(J);
    const int dim = 8 * n;
    std::vector<Counterexample> ces;
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            const Rational expected(m[static_cast<std::size_t>(a) * dim + b]);
            if (phi.at(a, b) != expected) {
                ces.push_back({a * dim + b, expected.str(), phi.at(a, b).str()});
            }
        }
    }
    return VerificationRecord::from("structure_form_identity(J" + std::to_string(k) + ",n=" +
                                        std::to_string(n) + ")",
                                    std::move(ces));
}

/// True iff Omega is invertible; exact rational Gaussian elimination.
inline bool check_nondegenerate(const ConstantTwoForm& form) {
    const int dim = form.dimension();
    std::vector<Rational> m = form.matrix();
    auto at = [&](int a, int b) -> Rational& {
        return m[static_cast<std::size_t>(a) * dim + b];
    };
    for (int col = 0; col < dim; ++col) {
        int pivot = -1;
        for (int row = col; row < dim; ++row) {
            if (!at(row, col).is_zero()) { pivot = row; break; }
        }
        if (pivot < 0) return false;
        if (pivot != col) {
            for (int b = 0; b < dim; ++b) std::swap(at(pivot, b), at(col, b));
        }
        const Rational inv = Rational(1) / at(col, col);
        for (int row = col + 1; row < dim; ++row) {
            if (at(row, col).is_zero()) continue;
            const Rational factor = at(row, col) * inv;
            for (int b = col; b < dim; ++b) at(row, b) -= factor * at(col, b);
        }
    }
    return true;
}

}  // namespace cliffmech
