#pragma once

#include <array>
#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliffmech/rational.hpp"

// Six structure tensors J_1..J_6 acting on an 8n-dimensional space, each a
// signed permutation of the coordinate basis. Coordinate a = b*n + i lives in
// block b (0..7); every J maps whole blocks to whole blocks with a fixed sign,
// so the action is stored as one target index and one sign per coordinate and
// all arithmetic in this header is exact integer arithmetic.

namespace cliffmech {

enum class Variant { primal, dual };

inline const char* to_string(Variant v) { return v == Variant::primal ? "primal" : "dual"; }

namespace detail {

// Block maps of the six structures: block b goes to kBlockTarget[k-1][b]
// with sign kBlockSign[k-1][b]. The dual tables coincide with the primal
// ones; the shipped fixture file transcribes both independently and the
// test suite compares against it.
inline constexpr std::array<std::array<int, 8>, 6> kBlockTarget = {{
    {1, 0, 4, 5, 2, 3, 7, 6},  // J1
    {2, 4, 0, 6, 1, 7, 3, 5},  // J2
    {3, 5, 6, 0, 7, 1, 2, 4},  // J3
    {4, 2, 1, 7, 0, 6, 5, 3},  // J4
    {5, 3, 7, 1, 6, 0, 4, 2},  // J5
    {6, 7, 3, 2, 5, 4, 0, 1},  // J6
}};

inline constexpr std::array<std::array<int, 8>, 6> kBlockSign = {{
    {+1, -1, +1, +1, -1, -1, +1, -1},  // J1
    {+1, -1, -1, +1, +1, -1, -1, +1},  // J2
    {+1, -1, -1, -1, +1, +1, +1, -1},  // J3
    {+1, -1, +1, -1, -1, +1, -1, +1},  // J4
    {+1, -1, -1, +1, +1, -1, -1, +1},  // J5
    {+1, -1, -1, +1, +1, -1, -1, +1},  // J6
}};

}  // namespace detail

/// Exact linear map sending basis vector e_a to sign[a] * e_target[a].
/// `label` carries the structure index 1..6 when the tensor is one of the
/// six generators; composites leave it empty. Invariants (bijective target,
/// signs in {-1,+1}, block homogeneity for labeled tensors) are enforced at
/// construction.
class SignedPermutationTensor {
public:
    SignedPermutationTensor(int n, Variant variant, std::vector<int> target,
                            std::vector<int> sign, std::optional<int> label = std::nullopt)
        : n_(n),
          variant_(variant),
          target_(std::move(target)),
          sign_(std::move(sign)),
          label_(label) {
        validate();
    }

    int n() const noexcept { return n_; }
    int dimension() const noexcept { return 8 * n_; }
    Variant variant() const noexcept { return variant_; }
    const std::vector<int>& target() const noexcept { return target_; }
    const std::vector<int>& sign() const noexcept { return sign_; }
    std::optional<int> label() const noexcept { return label_; }

    /// For composites that coincide with +/- one of the six generators:
    /// the matched index k and the overall sign.
    struct Identification {
        int k;
        int sign;
    };
    std::optional<Identification> identification() const noexcept { return identification_; }
    void set_identification(Identification id) { identification_ = id; }

    static SignedPermutationTensor identity(int n, Variant variant) {
        if (n < 1) throw std::invalid_argument("identity: n must be >= 1");
        std::vector<int> t(8 * n), s(8 * n, 1);
        for (int a = 0; a < 8 * n; ++a) t[a] = a;
        return SignedPermutationTensor(n, variant, std::move(t), std::move(s));
    }

    friend bool operator==(const SignedPermutationTensor& a, const SignedPermutationTensor& b) {
        return a.n_ == b.n_ && a.variant_ == b.variant_ && a.target_ == b.target_ &&
               a.sign_ == b.sign_;
    }

private:
    void validate() const {
        if (n_ < 1) throw std::invalid_argument("SignedPermutationTensor: n must be >= 1");
        const std::size_t dim = static_cast<std::size_t>(8 * n_);
        if (target_.size() != dim || sign_.size() != dim)
            throw std::invalid_argument("SignedPermutationTensor: array length != 8n");
        std::vector<char> seen(dim, 0);
        for (std::size_t a = 0; a < dim; ++a) {
            if (target_[a] < 0 || target_[a] >= static_cast<int>(dim) || seen[target_[a]])
                throw std::invalid_argument("SignedPermutationTensor: target is not a bijection");
            seen[target_[a]] = 1;
            if (sign_[a] != 1 && sign_[a] != -1)
                throw std::invalid_argument("SignedPermutationTensor: sign not in {-1,+1}");
        }
        if (label_) {
            if (*label_ < 1 || *label_ > 6)
                throw std::invalid_argument("SignedPermutationTensor: label out of 1..6");
            // Block homogeneity: coordinate b*n+i must map like coordinate b*n.
            for (int b = 0; b < 8; ++b) {
                const int base = b * n_;
                for (int i = 1; i < n_; ++i) {
                    if (target_[base + i] != target_[base] + i || sign_[base + i] != sign_[base])
                        throw std::invalid_argument(
                            "SignedPermutationTensor: labeled tensor is not block-homogeneous");
                }
            }
        }
    }

    int n_;
    Variant variant_;
    std::vector<int> target_;
    std::vector<int> sign_;
    std::optional<int> label_;
    std::optional<Identification> identification_;
};

/// Builds J_k (primal) or J_k* (dual) on dimension 8n from the block tables.
inline SignedPermutationTensor build_structure(int k, int n, Variant variant) {
    if (k < 1 || k > 6) throw std::invalid_argument("build_structure: k must be in 1..6");
    if (n < 1) throw std::invalid_argument("build_structure: n must be >= 1");
    std::vector<int> target(8 * n), sign(8 * n);
    for (int b = 0; b < 8; ++b) {
        for (int i = 0; i < n; ++i) {
            const int a = b * n + i;
            target[a] = detail::kBlockTarget[k - 1][b] * n + i;
            sign[a] = detail::kBlockSign[k - 1][b];
        }
    }
    return SignedPermutationTensor(n, variant, std::move(target), std::move(sign), k);
}

/// The six primal generators sharing one block size.
class StructureFamily {
public:
    explicit StructureFamily(int n) {
        if (n < 1) throw std::invalid_argument("StructureFamily: n must be >= 1");
        n_ = n;
        members_.reserve(6);
        for (int k = 1; k <= 6; ++k) members_.push_back(build_structure(k, n, Variant::primal));
    }

    int n() const noexcept { return n_; }
    const SignedPermutationTensor& member(int k) const {
        if (k < 1 || k > 6) throw std::invalid_argument("StructureFamily: k must be in 1..6");
        return members_[k - 1];
    }
    const std::vector<SignedPermutationTensor>& members() const noexcept { return members_; }

private:
    int n_;
    std::vector<SignedPermutationTensor> members_;
};

/// Symmetric metric coefficients on dimension 8n, identity by default.
/// Stored exactly; row-major g[a][b].
class Metric {
public:
    explicit Metric(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("Metric: n must be >= 1");
        const int dim = 8 * n;
        coeff_.assign(static_cast<std::size_t>(dim) * dim, Rational(0));
        for (int a = 0; a < dim; ++a) at(a, a) = Rational(1);
    }

    Metric(int n, std::vector<Rational> coeff) : n_(n), coeff_(std::move(coeff)) {
        const int dim = 8 * n;
        if (n < 1 || coeff_.size() != static_cast<std::size_t>(dim) * dim)
            throw std::invalid_argument("Metric: bad dimensions");
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                if (at(a, b) != at(b, a)) throw std::invalid_argument("Metric: not symmetric");
    }

    int n() const noexcept { return n_; }
    int dimension() const noexcept { return 8 * n_; }
    const Rational& at(int a, int b) const { return coeff_[idx(a, b)]; }
    Rational& at(int a, int b) { return coeff_[idx(a, b)]; }

    bool is_identity() const {
        const int dim = dimension();
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                if (at(a, b) != Rational(a == b ? 1 : 0)) return false;
        return true;
    }

private:
    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * dimension() + static_cast<std::size_t>(b);
    }

    int n_;
    std::vector<Rational> coeff_;
};

/// One failed comparison inside a verification check.
struct Counterexample {
    int basis_index;
    std::string expected;
    std::string actual;
};

/// Outcome of one algebraic check; pass holds exactly when no counterexamples
/// were collected.
struct VerificationRecord {
    std::string check;
    bool pass = true;
    std::vector<Counterexample> counterexamples;

    static VerificationRecord from(std::string name, std::vector<Counterexample> ces) {
        VerificationRecord rec;
        rec.check = std::move(name);
        rec.pass = ces.empty();
        rec.counterexamples = std::move(ces);
        return rec;
    }
};

namespace detail {

inline std::string signed_basis_str(long long coeff, int index) {
    if (coeff == 0) return "0";
    std::string s = coeff > 0 ? "+" : "-";
    long long mag = coeff > 0 ? coeff : -coeff;
    if (mag != 1) s += std::to_string(mag) + "*";
    return s + "e" + std::to_string(index);
}

}  // namespace detail

/// Applies the tensor to a coefficient vector: result[target[a]] = sign[a] * v[a].
template <typename Scalar>
std::vector<Scalar> apply_structure(const SignedPermutationTensor& J, const std::vector<Scalar>& v) {
    if (v.size() != static_cast<std::size_t>(J.dimension()))
        throw std::invalid_argument("apply_structure: vector length != 8n");
    std::vector<Scalar> out(v.size(), Scalar(0));
    for (std::size_t a = 0; a < v.size(); ++a) {
        out[J.target()[a]] = J.sign()[a] > 0 ? v[a] : Scalar(-v[a]);
    }
    return out;
}

/// Composition acting as A after B. The result keeps its generator label only
/// when it coincides exactly with +J_k; equality with -J_k (or +J_k) is also
/// recorded in the identification metadata.
inline SignedPermutationTensor compose(const SignedPermutationTensor& A,
                                       const SignedPermutationTensor& B) {
    if (A.n() != B.n()) throw std::invalid_argument("compose: mismatched n");
    if (A.variant() != B.variant()) throw std::invalid_argument("compose: mismatched variant");
    const int dim = A.dimension();
    std::vector<int> target(dim), sign(dim);
    for (int a = 0; a < dim; ++a) {
        const int mid = B.target()[a];
        target[a] = A.target()[mid];
        sign[a] = B.sign()[a] * A.sign()[mid];
    }

    std::optional<int> label;
    std::optional<SignedPermutationTensor::Identification> ident;
    for (int k = 1; k <= 6; ++k) {
        const auto Jk = build_structure(k, A.n(), A.variant());
        if (target == Jk.target()) {
            bool plus = std::equal(sign.begin(), sign.end(), Jk.sign().begin());
            bool minus = true;
            for (int a = 0; a < dim; ++a)
                if (sign[a] != -Jk.sign()[a]) { minus = false; break; }
            if (plus) { label = k; ident = {k, +1}; }
            else if (minus) { ident = {k, -1}; }
            break;
        }
    }

    SignedPermutationTensor out(A.n(), A.variant(), std::move(target), std::move(sign), label);
    if (ident) out.set_identification(*ident);
    return out;
}

/// Checks J∘J == -identity on every basis vector, exactly.
inline VerificationRecord check_square_minus_identity(const SignedPermutationTensor& J) {
    std::vector<Counterexample> ces;
    const int dim = J.dimension();
    for (int a = 0; a < dim; ++a) {
        const int mid = J.target()[a];
        const int tgt = J.target()[mid];
        const int sgn = J.sign()[a] * J.sign()[mid];
        if (tgt != a || sgn != -1) {
            ces.push_back({a, detail::signed_basis_str(-1, a), detail::signed_basis_str(sgn, tgt)});
        }
    }
    std::string name = "square_minus_identity";
    if (J.label()) name += "(J" + std::to_string(*J.label()) + "," + to_string(J.variant()) + ")";
    return VerificationRecord::from(std::move(name), std::move(ces));
}

/// Checks g(J e_a, J e_b) == g(e_a, e_b) for all basis pairs, exactly.
inline VerificationRecord check_orthogonality(const SignedPermutationTensor& J, const Metric& g) {
    if (g.dimension() != J.dimension())
        throw std::invalid_argument("check_orthogonality: metric dimension mismatch");
    std::vector<Counterexample> ces;
    const int dim = J.dimension();
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            const Rational lhs = Rational(J.sign()[a] * J.sign()[b]) * g.at(J.target()[a], J.target()[b]);
            const Rational rhs = g.at(a, b);
            if (lhs != rhs) {
                ces.push_back({a * dim + b, rhs.str(), lhs.str()});
            }
        }
    }
    std::string name = "orthogonality";
    if (J.label()) name += "(J" + std::to_string(*J.label()) + "," + to_string(J.variant()) + ")";
    return VerificationRecord::from(std::move(name), std::move(ces));
}

/// Checks that the dual table equals the primal table entry for entry.
inline VerificationRecord dual_matches_primal(int k, int n) {
    const auto primal = build_structure(k, n, Variant::primal);
    const auto dual = build_structure(k, n, Variant::dual);
    std::vector<Counterexample> ces;
    for (int a = 0; a < primal.dimension(); ++a) {
        if (primal.target()[a] != dual.target()[a] || primal.sign()[a] != dual.sign()[a]) {
            ces.push_back({a, detail::signed_basis_str(primal.sign()[a], primal.target()[a]),
                           detail::signed_basis_str(dual.sign()[a], dual.target()[a])});
        }
    }
    return VerificationRecord::from("dual_matches_primal(J" + std::to_string(k) + ",n=" +
                                        std::to_string(n) + ")",
                                    std::move(ces));
}

/// One pair (i, j) of the anticommutator report. The 8x8 block matrix stores
/// the exact action of J_iJ_j + J_jJ_i on block generators; clifford holds
/// when the anticommutator equals -2*delta_ij*identity on all 8n basis
/// vectors. `product_class` classifies the single product J_iJ_j among
/// +-J_1..6 and +-identity ("composite" otherwise).
struct AnticommutatorEntry {
    int i = 0;
    int j = 0;
    std::array<std::array<long long, 8>, 8> block_matrix{};
    bool clifford_relation_holds = false;
    std::string product_class;
};

struct AnticommutatorReport {
    int n = 0;
    std::vector<AnticommutatorEntry> entries;  // pairs (i, j) with i <= j

    const AnticommutatorEntry& pair(int i, int j) const {
        for (const auto& e : entries)
            if (e.i == std::min(i, j) && e.j == std::max(i, j)) return e;
        throw std::invalid_argument("AnticommutatorReport: pair out of range");
    }
};

namespace detail {

inline std::string classify_product(const SignedPermutationTensor& P) {
    if (auto id = P.identification())
        return (id->sign > 0 ? "+J" : "-J") + std::to_string(id->k);
    if (P.label()) return "+J" + std::to_string(*P.label());
    const auto I = SignedPermutationTensor::identity(P.n(), P.variant());
    if (P.target() == I.target()) {
        bool plus = true, minus = true;
        for (int s : P.sign()) { plus &= (s == 1); minus &= (s == -1); }
        if (plus) return "+I";
        if (minus) return "-I";
    }
    return "composite";
}

}  // namespace detail

/// Computes, for every pair i <= j, the exact anticommutator J_iJ_j + J_jJ_i
/// and whether it equals -2*delta_ij*identity. Reports; asserts nothing.
inline AnticommutatorReport anticommutator_table(const StructureFamily& family) {
    AnticommutatorReport report;
    report.n = family.n();
    const int n = family.n();
    const int dim = 8 * n;
    for (int i = 1; i <= 6; ++i) {
        for (int j = i; j <= 6; ++j) {
            const auto& Ji = family.member(i);
            const auto& Jj = family.member(j);
            AnticommutatorEntry entry;
            entry.i = i;
            entry.j = j;
            entry.clifford_relation_holds = true;
            const long long expected_diag = (i == j) ? -2 : 0;
            for (int a = 0; a < dim; ++a) {
                // J_i(J_j e_a) + J_j(J_i e_a), exact.
                const int t1 = Ji.target()[Jj.target()[a]];
                const long long s1 = Jj.sign()[a] * Ji.sign()[Jj.target()[a]];
                const int t2 = Jj.target()[Ji.target()[a]];
                const long long s2 = Ji.sign()[a] * Jj.sign()[Ji.target()[a]];
                long long coeff_t1 = s1, coeff_t2 = s2;
                if (t1 == t2) { coeff_t1 = s1 + s2; coeff_t2 = 0; }
                // clifford relation: result must be expected_diag * e_a
                long long at_a = (t1 == a ? coeff_t1 : 0) + (t2 == a && t1 != t2 ? coeff_t2 : 0);
                bool off_diag_clean = true;
                if (t1 != a && coeff_t1 != 0) off_diag_clean = false;
                if (t2 != a && t1 != t2 && coeff_t2 != 0) off_diag_clean = false;
                if (at_a != expected_diag || !off_diag_clean)
                    entry.clifford_relation_holds = false;
                if (a % n == 0) {
                    const int b = a / n;
                    if (coeff_t1 != 0) entry.block_matrix[t1 / n][b] += coeff_t1;
                    if (t1 != t2 && coeff_t2 != 0) entry.block_matrix[t2 / n][b] += coeff_t2;
                }
            }
            entry.product_class = detail::classify_product(compose(Ji, Jj));
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

/// Integer matrix of J as a linear map: M[target[a]][a] = sign[a].
inline std::vector<long long> matrix_of(const SignedPermutationTensor& J) {
    const int dim = J.dimension();
    std::vector<long long> m(static_cast<std::size_t>(dim) * dim, 0);
    for (int a = 0; a < dim; ++a)
        m[static_cast<std::size_t>(J.target()[a]) * dim + a] = J.sign()[a];
    return m;
}

}  // namespace cliffmech
