#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "cliffmech/forms.hpp"

using namespace cliffmech;

TEST_CASE("canonical one form is half the identity") {
    for (int n : {1, 2}) {
        const auto omega = canonical_one_form(n);
        for (int a = 0; a < 8 * n; ++a)
            for (int b = 0; b < 8 * n; ++b)
                CHECK(omega.linear(a, b) == (a == b ? Rational::half() : Rational(0)));
        for (int b = 0; b < 8 * n; ++b) CHECK(omega.constant(b) == Rational(0));
    }
    CHECK_THROWS_AS(canonical_one_form(0), std::invalid_argument);

    const auto at_zero = canonical_one_form(1).evaluate(std::vector<double>(8, 0.0));
    for (double c : at_zero.components) CHECK(c == 0.0);
}

TEST_CASE("pullback along J4* reproduces the Liouville form term for term") {
    const auto lambda = liouville_form(4, 1);
    // 1/2 (x0 dx4 - x1 dx2 + x2 dx1 - x3 dx7 - x4 dx0 + x5 dx6 - x6 dx5 + x7 dx3)
    const std::array<std::pair<int, int>, 8> terms = {{
        {4, +1}, {2, -1}, {1, +1}, {7, -1}, {0, -1}, {6, +1}, {5, -1}, {3, +1}}};
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            const Rational expected =
                b == terms[a].first ? Rational(terms[a].second, 2) : Rational(0);
            CHECK(lambda.linear(a, b) == expected);
        }
    }
}

TEST_CASE("pullback along J5* and J6* match their printed expansions") {
    const auto l5 = liouville_form(5, 1);
    CHECK(l5.linear(2, 7) == Rational(-1, 2));
    CHECK(l5.linear(0, 5) == Rational::half());
    CHECK(l5.linear(3, 1) == Rational::half());
    CHECK(l5.linear(6, 4) == Rational(-1, 2));

    const auto l6 = liouville_form(6, 1);
    const std::array<std::pair<int, int>, 8> terms = {{
        {6, +1}, {7, -1}, {3, -1}, {2, +1}, {5, +1}, {4, -1}, {0, -1}, {1, +1}}};
    for (int a = 0; a < 8; ++a) CHECK(l6.linear(a, terms[a].first) == Rational(terms[a].second, 2));
}

TEST_CASE("pullback along the identity leaves a form unchanged") {
    LinearOneForm f(1);
    f.linear(0, 3) = Rational(2, 3);
    f.constant(5) = Rational(7);
    const auto out = apply_dual_structure(SignedPermutationTensor::identity(1, Variant::dual), f);
    CHECK(out == f);
}

TEST_CASE("pullback requires a dual tensor and matching dimension") {
    LinearOneForm f(1);
    CHECK_THROWS_AS(apply_dual_structure(build_structure(1, 1, Variant::primal), f),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_dual_structure(build_structure(1, 2, Variant::dual), f),
                    std::invalid_argument);
}

TEST_CASE("exterior derivative of simple forms") {
    LinearOneForm f(1);
    f.linear(0, 4) = Rational(1);  // x0 dx4
    const auto d = exterior_derivative(f);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            Rational expected(0);
            if (a == 0 && b == 4) expected = Rational(1);
            if (a == 4 && b == 0) expected = Rational(-1);
            CHECK(d.at(a, b) == expected);
        }

    LinearOneForm g(1);
    g.linear(0, 0) = Rational(1);  // x0 dx0
    g.constant(3) = Rational(5);   // constant part never contributes
    const auto dg = exterior_derivative(g);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) CHECK(dg.at(a, b) == Rational(0));
}

TEST_CASE("exterior derivative output is antisymmetric for random forms") {
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        LinearOneForm f(1);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) f.linear(a, b) = Rational(num(rng), den(rng));
        const auto d = exterior_derivative(f);
        for (int a = 0; a < 8; ++a) {
            CHECK(d.at(a, a) == Rational(0));
            for (int b = 0; b < 8; ++b) CHECK(d.at(a, b) == -d.at(b, a));
        }
    }
}

TEST_CASE("symplectic forms reproduce the printed wedge pairs") {
    struct Fixture {
        int k;
        std::array<std::pair<int, int>, 4> pairs;
    };
    const std::vector<Fixture> fixtures = {
        {4, {{{1, 2}, {3, 7}, {4, 0}, {6, 5}}}},
        {5, {{{1, 3}, {2, 7}, {5, 0}, {6, 4}}}},
        {6, {{{1, 7}, {2, 3}, {5, 4}, {6, 0}}}},
    };
    for (const auto& fx : fixtures) {
        const auto phi = symplectic_form_of_structure(fx.k, 1);
        int nonzero = 0;
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b)
                if (!phi.at(a, b).is_zero()) ++nonzero;
        CHECK(nonzero == 8);  // the four printed wedges and their mirrors
        for (const auto& [a, b] : fx.pairs) {
            CHECK(phi.at(a, b) == Rational(1));
            CHECK(phi.at(b, a) == Rational(-1));
        }
    }
    CHECK_THROWS_AS(symplectic_form_of_structure(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(symplectic_form_of_structure(7, 1), std::invalid_argument);
}

TEST_CASE("the -d(lambda) pipeline equals the direct construction") {
    for (int k = 1; k <= 6; ++k) {
        const auto direct = symplectic_form_of_structure(k, 1);
        const auto pipeline = -exterior_derivative(liouville_form(k, 1));
        CHECK(direct == pipeline);
    }
}

TEST_CASE("interior product against Phi_J4*") {
    const auto phi = symplectic_form_of_structure(4, 1);

    std::vector<double> e1(8, 0.0);
    e1[1] = 1.0;
    auto v = interior_product(phi, e1);
    for (int b = 0; b < 8; ++b) CHECK(v.components[b] == (b == 2 ? 1.0 : 0.0));

    std::vector<double> e0(8, 0.0);
    e0[0] = 1.0;
    v = interior_product(phi, e0);
    for (int b = 0; b < 8; ++b) CHECK(v.components[b] == (b == 4 ? -1.0 : 0.0));

    v = interior_product(phi, std::vector<double>(8, 0.0));
    for (double c : v.components) CHECK(c == 0.0);

    CHECK_THROWS_AS(interior_product(phi, std::vector<double>(7, 0.0)), std::invalid_argument);
}

TEST_CASE("interior product reproduces the full contraction pattern") {
    // X = (1,2,...,8) against Phi_J4*; expected components from the wedge
    // pairs (1,2),(3,7),(4,0),(6,5).
    const auto phi = symplectic_form_of_structure(4, 1);
    std::vector<Rational> X;
    for (int a = 1; a <= 8; ++a) X.push_back(Rational(a));
    const auto v = interior_product(phi, X);
    const std::vector<long long> expected = {5, -3, 2, -8, -1, 7, -6, 4};
    for (int b = 0; b < 8; ++b) CHECK(v[b] == Rational(expected[b]));
}

TEST_CASE("structure-form identity holds for every k and n up to 4") {
    CHECK(structure_form_identity(1, 1).pass);
    CHECK(structure_form_identity(4, 1).pass);
    for (int k = 1; k <= 6; ++k)
        for (int n = 1; n <= 4; ++n) CHECK(structure_form_identity(k, n).pass);
}

TEST_CASE("transposing the form flips every nonzero entry of the identity") {
    const auto phi = symplectic_form_of_structure(4, 1);
    const auto J = build_structure(4, 1, Variant::primal);
    const auto m = matrix_of(J);
    int mismatches = 0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            if (phi.at(b, a) != Rational(m[a * 8 + b])) ++mismatches;  // transposed lookup
    CHECK(mismatches == 8);  // every nonzero entry flips
}

TEST_CASE("fundamental two-form entries and sign relation") {
    const Metric g(1);
    const auto f1 = fundamental_two_form(build_structure(1, 1, Variant::primal), g);
    CHECK(f1.at(0, 1) == Rational(1));

    const auto f4 = fundamental_two_form(build_structure(4, 1, Variant::primal), g);
    CHECK(f4.at(0, 4) == Rational(1));
    CHECK(f4.at(4, 0) == Rational(-1));

    for (int n = 1; n <= 4; ++n) {
        const Metric gn(n);
        for (int k = 1; k <= 6; ++k) {
            const auto fund = fundamental_two_form(build_structure(k, n, Variant::primal), gn);
            const auto phi = symplectic_form_of_structure(k, n);
            CHECK(fund == -phi);
        }
    }

    CHECK_THROWS_AS(fundamental_two_form(build_structure(1, 1, Variant::dual), g),
                    std::invalid_argument);
}

TEST_CASE("nondegeneracy via exact elimination") {
    CHECK(check_nondegenerate(symplectic_form_of_structure(5, 1)));
    CHECK(!check_nondegenerate(ConstantTwoForm(1)));
    CHECK(check_nondegenerate(symplectic_form_of_structure(6, 3)));

    // Independent invertibility witness: Phi squares to minus identity.
    const auto phi = symplectic_form_of_structure(6, 3);
    const int dim = phi.dimension();
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            Rational acc(0);
            for (int c = 0; c < dim; ++c) acc += phi.at(a, c) * phi.at(c, b);
            CHECK(acc == Rational(a == b ? -1 : 0));
        }
    }
}

TEST_CASE("two-form type enforces antisymmetry") {
    std::vector<Rational> bad(64, Rational(0));
    bad[0 * 8 + 1] = Rational(1);  // missing the mirrored -1
    CHECK_THROWS_AS(ConstantTwoForm(1, bad), std::invalid_argument);
}
