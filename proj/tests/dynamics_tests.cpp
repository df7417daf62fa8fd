#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cliffmech/dynamics.hpp"

using namespace cliffmech;

namespace {

HamiltonianSystem quadratic_system(const Matrix& Q) {
    HamiltonianSystem sys;
    sys.dimension = Q.rows();
    sys.energy = [Q](const std::vector<double>& x) {
        double acc = 0.0;
        const auto qx = Q.apply(x);
        for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * qx[i];
        return 0.5 * acc;
    };
    sys.gradient = [Q](const std::vector<double>& x) { return Q.apply(x); };
    return sys;
}

HamiltonianSystem negated(const HamiltonianSystem& sys) {
    HamiltonianSystem out = sys;
    out.energy = [sys](const std::vector<double>& x) { return -sys.energy(x); };
    out.gradient = [sys](const std::vector<double>& x) {
        auto g = sys.gradient(x);
        for (double& v : g) v = -v;
        return g;
    };
    return out;
}

HamiltonianSystem canonical_quadratic(int dim) { return quadratic_system(Matrix::identity(dim)); }

PhasePoint unit_point(int dim, int a) {
    PhasePoint p;
    p.coordinates.assign(dim, 0.0);
    p.coordinates[a] = 1.0;
    return p;
}

double max_err(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("hamilton vector field reads the equations off the form") {
    const auto phi4 = symplectic_form_of_structure(4, 1);
    const auto sys = canonical_quadratic(8);

    // gradient e0 at x = e0: dx4/dt = dH/dx0
    auto X = hamilton_vector_field(phi4, sys, unit_point(8, 0));
    for (int a = 0; a < 8; ++a) CHECK(X[a] == doctest::Approx(a == 4 ? 1.0 : 0.0).epsilon(1e-14));

    // gradient e4 at x = e4: dx0/dt = -dH/dx4
    X = hamilton_vector_field(phi4, sys, unit_point(8, 4));
    for (int a = 0; a < 8; ++a) CHECK(X[a] == doctest::Approx(a == 0 ? -1.0 : 0.0).epsilon(1e-14));

    // zero gradient: zero field
    PhasePoint origin;
    origin.coordinates.assign(8, 0.0);
    X = hamilton_vector_field(phi4, sys, origin);
    for (double v : X) CHECK(v == 0.0);
}

TEST_CASE("linear solve agrees with the closed form for random gradients") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n : {1, 2}) {
        for (int k = 1; k <= 6; ++k) {
            const auto form = symplectic_form_of_structure(k, n);
            const TwoFormOperator op(form);
            REQUIRE(op.squares_to_minus_identity());
            const int dim = 8 * n;
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<double> g(dim);
                for (double& v : g) v = u(rng);
                const auto solved = lu_solve(op.omega().transposed(), g);
                const auto closed = op.omega().apply(g);
                CHECK(max_err(solved, closed) <= 1e-12);
                // and the solution satisfies the defining linear system
                for (int b = 0; b < dim; ++b) {
                    double acc = 0.0;
                    for (int a = 0; a < dim; ++a) acc += solved[a] * op.omega()(a, b);
                    CHECK(std::abs(acc - g[b]) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("degenerate forms are rejected") {
    const auto sys = canonical_quadratic(8);
    CHECK_THROWS_AS(hamilton_vector_field(ConstantTwoForm(1), sys, unit_point(8, 0)),
                    singular_system_error);
    const auto phi = symplectic_form_of_structure(1, 1);
    HamiltonianSystem wrong = canonical_quadratic(16);
    CHECK_THROWS_AS(hamilton_vector_field(phi, wrong, unit_point(16, 0)), std::invalid_argument);
}

TEST_CASE("symbolic equation sets match the published block maps") {
    const EquationSet s4 = symbolic_equations(4);
    const std::vector<EquationRecord> expected4 = {
        {0, -1, 4}, {1, +1, 2}, {2, -1, 1}, {3, +1, 7},
        {4, +1, 0}, {5, -1, 6}, {6, +1, 5}, {7, -1, 3}};
    CHECK(s4.records == expected4);

    const EquationSet s1 = symbolic_equations(1);
    const std::vector<EquationRecord> expected1 = {
        {0, -1, 1}, {1, +1, 0}, {2, -1, 4}, {3, -1, 5},
        {4, +1, 2}, {5, +1, 3}, {6, -1, 7}, {7, +1, 6}};
    CHECK(s1.records == expected1);

    const EquationSet s6 = symbolic_equations(6);
    const std::vector<EquationRecord> expected6 = {
        {0, -1, 6}, {1, +1, 7}, {2, +1, 3}, {3, -1, 2},
        {4, -1, 5}, {5, +1, 4}, {6, +1, 0}, {7, -1, 1}};
    CHECK(s6.records == expected6);
}

TEST_CASE("every equation set uses each gradient block exactly once") {
    for (int k = 1; k <= 6; ++k) {
        const auto set = symbolic_equations(k);
        REQUIRE(set.records.size() == 8);
        std::vector<int> lhs_seen(8, 0), rhs_seen(8, 0);
        for (const auto& r : set.records) {
            ++lhs_seen[r.lhs_block];
            ++rhs_seen[r.rhs_block];
            CHECK((r.sign == 1 || r.sign == -1));
        }
        for (int b = 0; b < 8; ++b) {
            CHECK(lhs_seen[b] == 1);
            CHECK(rhs_seen[b] == 1);
        }
    }
}

TEST_CASE("rotation flow: rk4 hits the closed form, midpoint at its order") {
    const auto sys = canonical_quadratic(8);
    const auto phi1 = symplectic_form_of_structure(1, 1);
    const PhasePoint x0 = unit_point(8, 0);

    std::vector<double> closed(8, 0.0);
    closed[0] = std::cos(1.0);
    closed[1] = std::sin(1.0);

    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.steps = 1000;

    cfg.method = Method::rk4;
    const auto rk = integrate(sys, phi1, x0, cfg);
    CHECK(max_err(rk.points.back().coordinates, closed) <= 1e-9);

    // implicit midpoint carries its second-order phase error, about
    // sin(1)*dt^2/12 here; assert the measured level and the conservation.
    cfg.method = Method::implicit_midpoint;
    const auto mid = integrate(sys, phi1, x0, cfg);
    const double err = max_err(mid.points.back().coordinates, closed);
    CHECK(err <= 1e-7);
    CHECK(err >= 1e-8);
    CHECK(energy_drift(mid).max_drift <= 1e-10);
}

TEST_CASE("zero steps yields exactly the initial point") {
    const auto sys = canonical_quadratic(8);
    IntegratorConfig cfg;
    cfg.steps = 0;
    const auto traj = integrate(sys, symplectic_form_of_structure(2, 1), unit_point(8, 3), cfg);
    REQUIRE(traj.points.size() == 1);
    CHECK(traj.points[0].coordinates[3] == 1.0);
    CHECK(traj.energy.size() == 1);
}

TEST_CASE("trajectory times are strictly increasing and uniformly spaced") {
    const auto sys = canonical_quadratic(8);
    IntegratorConfig cfg;
    cfg.method = Method::rk4;
    cfg.dt = 0.01;
    cfg.steps = 137;
    const auto traj = integrate(sys, symplectic_form_of_structure(3, 1), unit_point(8, 0), cfg);
    REQUIRE(traj.points.size() == 138);
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
        const double gap = traj.points[i].time - traj.points[i - 1].time;
        CHECK(gap > 0.0);
        CHECK(std::abs(gap - cfg.dt) <= 16 * std::numeric_limits<double>::epsilon() *
                                             (1.0 + traj.points[i].time));
    }
}

TEST_CASE("integrator config validation") {
    const auto sys = canonical_quadratic(8);
    const auto phi = symplectic_form_of_structure(1, 1);
    IntegratorConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(integrate(sys, phi, unit_point(8, 0), cfg), std::invalid_argument);
    cfg.dt = -0.1;
    CHECK_THROWS_AS(integrate(sys, phi, unit_point(8, 0), cfg), std::invalid_argument);
    cfg.dt = 0.1;
    cfg.steps = -1;
    CHECK_THROWS_AS(integrate(sys, phi, unit_point(8, 0), cfg), std::invalid_argument);
    cfg.steps = 1;
    PhasePoint bad = unit_point(8, 0);
    bad.coordinates[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(integrate(sys, phi, bad, cfg), std::invalid_argument);
}

TEST_CASE("divergent flows abort with the step index") {
    // Quartic energy with a huge step: rk4 blows up to non-finite values.
    HamiltonianSystem sys;
    sys.dimension = 8;
    sys.energy = [](const std::vector<double>& x) {
        return 0.25 * (std::pow(x[0], 4) + std::pow(x[1], 4));
    };
    sys.gradient = [](const std::vector<double>& x) {
        std::vector<double> g(8, 0.0);
        g[0] = std::pow(x[0], 3);
        g[1] = std::pow(x[1], 3);
        return g;
    };
    IntegratorConfig cfg;
    cfg.method = Method::rk4;
    cfg.dt = 50.0;
    cfg.steps = 100;
    PhasePoint x0 = unit_point(8, 0);
    x0.coordinates[1] = 1.0;
    try {
        integrate(sys, symplectic_form_of_structure(1, 1), x0, cfg);
        FAIL("expected integration_error");
    } catch (const integration_error& e) {
        CHECK(e.kind() == integration_error::Kind::divergence);
        CHECK(e.step() < 100);
    }
}

TEST_CASE("midpoint reports non-convergence when the step is too large") {
    const auto sys = canonical_quadratic(8);
    IntegratorConfig cfg;
    cfg.method = Method::implicit_midpoint;
    cfg.dt = 3.0;  // contraction factor dt/2 > 1: fixed point iteration cannot settle
    cfg.steps = 1;
    try {
        integrate(sys, symplectic_form_of_structure(1, 1), unit_point(8, 0), cfg);
        FAIL("expected integration_error");
    } catch (const integration_error& e) {
        CHECK(e.kind() == integration_error::Kind::non_convergence);
        CHECK(e.step() == 0);
    }
}

TEST_CASE("quadratic flow oracle basics") {
    const auto phi1 = symplectic_form_of_structure(1, 1);
    const PhasePoint x0 = unit_point(8, 0);

    auto p = quadratic_flow_oracle(Matrix::identity(8), phi1, x0, 0.0);
    CHECK(max_err(p.coordinates, x0.coordinates) == 0.0);

    p = quadratic_flow_oracle(Matrix::identity(8), phi1, x0, std::acos(-1.0) / 2.0);
    std::vector<double> e1(8, 0.0);
    e1[1] = 1.0;
    CHECK(max_err(p.coordinates, e1) <= 1e-10);

    p = quadratic_flow_oracle(Matrix(8, 8), phi1, x0, 17.0);
    CHECK(max_err(p.coordinates, x0.coordinates) == 0.0);

    // closed form at a generic time: cos(t) e0 + sin(t) e1
    const double t = 0.7;
    p = quadratic_flow_oracle(Matrix::identity(8), phi1, x0, t);
    std::vector<double> expect(8, 0.0);
    expect[0] = std::cos(t);
    expect[1] = std::sin(t);
    CHECK(max_err(p.coordinates, expect) <= 1e-12);

    Matrix asym(8, 8);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(quadratic_flow_oracle(asym, phi1, x0, 1.0), std::invalid_argument);
}

TEST_CASE("both integrators converge to the oracle with their orders") {
    Matrix Q(8, 8);
    const double diag[8] = {1.0, 1.3, 0.7, 1.9, 0.4, 1.1, 1.6, 0.8};
    for (int i = 0; i < 8; ++i) Q(i, i) = diag[i];
    const auto sys = quadratic_system(Q);
    const auto phi1 = symplectic_form_of_structure(1, 1);
    PhasePoint x0;
    x0.coordinates = {1.0, 0.5, -0.3, 0.8, 0.2, -0.7, 0.4, -0.1};

    const auto exact = quadratic_flow_oracle(Q, phi1, x0, 1.0);

    auto run = [&](Method m, double dt) {
        IntegratorConfig cfg;
        cfg.method = m;
        cfg.dt = dt;
        cfg.steps = std::lround(1.0 / dt);
        return max_err(integrate(sys, phi1, x0, cfg).points.back().coordinates,
                       exact.coordinates);
    };

    const double dts[3] = {1e-1, 5e-2, 2.5e-2};
    double rk_err[3], mid_err[3];
    for (int i = 0; i < 3; ++i) {
        rk_err[i] = run(Method::rk4, dts[i]);
        mid_err[i] = run(Method::implicit_midpoint, dts[i]);
    }
    for (int i = 0; i + 1 < 3; ++i) {
        CHECK(std::log2(rk_err[i] / rk_err[i + 1]) >= 3.9);
        CHECK(std::log2(mid_err[i] / mid_err[i + 1]) >= 1.9);
    }
}

TEST_CASE("energy drift diagnostics") {
    Trajectory single;
    single.points.push_back(unit_point(8, 0));
    single.energy.push_back(2.5);
    const auto d0 = energy_drift(single);
    CHECK(d0.max_drift == 0.0);
    CHECK(d0.slope == 0.0);

    // synthetic linear drift: slope is recovered exactly
    Trajectory synth;
    for (int i = 0; i <= 10; ++i) {
        PhasePoint p;
        p.coordinates.assign(8, 0.0);
        p.time = 0.1 * i;
        synth.points.push_back(p);
        synth.energy.push_back(2.0 + 0.5 * p.time);
    }
    const auto ds = energy_drift(synth);
    CHECK(ds.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ds.max_drift == doctest::Approx(0.5).epsilon(1e-12));

    Trajectory empty;
    CHECK_THROWS_AS(energy_drift(empty), std::invalid_argument);
}

TEST_CASE("midpoint conserves quadratic energy to round-off; rk4 stays small") {
    const auto sys = canonical_quadratic(8);
    const auto phi1 = symplectic_form_of_structure(1, 1);
    const PhasePoint x0 = unit_point(8, 0);

    IntegratorConfig cfg;
    cfg.dt = 1e-2;
    cfg.steps = 10000;
    cfg.method = Method::implicit_midpoint;
    CHECK(energy_drift(integrate(sys, phi1, x0, cfg)).max_drift <= 1e-10);

    cfg.method = Method::rk4;
    CHECK(energy_drift(integrate(sys, phi1, x0, cfg)).max_drift <= 1e-7);
}

TEST_CASE("midpoint is reversible: forward then backward returns the start") {
    const auto sys = canonical_quadratic(8);
    const auto phi1 = symplectic_form_of_structure(1, 1);
    PhasePoint x0;
    x0.coordinates = {0.9, -0.2, 0.4, 0.1, -0.5, 0.3, 0.0, 0.7};

    IntegratorConfig cfg;
    cfg.method = Method::implicit_midpoint;
    cfg.dt = 1e-2;
    cfg.steps = 100;
    const auto forward = integrate(sys, phi1, x0, cfg);

    // Integrating the negated Hamiltonian forward is exactly the reverse-time
    // step for the midpoint rule.
    PhasePoint xf;
    xf.coordinates = forward.points.back().coordinates;
    const auto back = integrate(negated(sys), phi1, xf, cfg);
    CHECK(max_err(back.points.back().coordinates, x0.coordinates) <= 1e-10);
}

TEST_CASE("symplecticity residual: midpoint tiny, identity exact, rk4 larger on a quartic") {
    const auto phi1 = symplectic_form_of_structure(1, 1);
    const auto quad = canonical_quadratic(8);
    PhasePoint x0;
    x0.coordinates = {0.6, -0.1, 0.3, 0.2, -0.4, 0.5, -0.2, 0.1};

    IntegratorConfig cfg;
    cfg.method = Method::implicit_midpoint;
    cfg.dt = 1e-2;
    cfg.steps = 1;
    CHECK(symplecticity_residual(quad, phi1, x0, cfg) <= 1e-6);

    cfg.steps = 0;  // identity map
    CHECK(symplecticity_residual(quad, phi1, x0, cfg) <= 1e-9);

    HamiltonianSystem quartic;
    quartic.dimension = 8;
    quartic.energy = [](const std::vector<double>& x) {
        double acc = 0.0;
        for (double v : x) acc += 0.25 * v * v * v * v;
        return acc;
    };
    quartic.gradient = [](const std::vector<double>& x) {
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] * x[i] * x[i];
        return g;
    };
    cfg.dt = 1e-1;
    cfg.steps = 1;
    cfg.method = Method::implicit_midpoint;
    const double mid_res = symplecticity_residual(quartic, phi1, x0, cfg);
    cfg.method = Method::rk4;
    const double rk_res = symplecticity_residual(quartic, phi1, x0, cfg);
    CHECK(rk_res > mid_res);
}

TEST_CASE("expression-backed systems: symbolic and finite-difference gradients agree") {
    const auto H = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2) + 0.1*x0*x4", 8);
    const auto sym = make_hamiltonian_system(H, GradientMode::symbolic);
    const auto fd = make_hamiltonian_system(H, GradientMode::finite_difference);
    CHECK(sym.provenance == GradientMode::symbolic);
    CHECK(fd.provenance == GradientMode::finite_difference);

    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(8);
        for (double& v : x) v = u(rng);
        const auto gs = sym.gradient(x);
        const auto gf = fd.gradient(x);
        CHECK(max_err(gs, gf) <= 1e-8);
        CHECK(sym.energy(x) == fd.energy(x));
    }
}

TEST_CASE("matrix exponential sanity against hand values") {
    // diagonal case
    Matrix D(3, 3);
    D(0, 0) = 1.0;
    D(1, 1) = -2.0;
    D(2, 2) = 0.5;
    const Matrix E = expm(D);
    CHECK(E(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(E(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(E(2, 2) == doctest::Approx(std::exp(0.5)).epsilon(1e-13));
    CHECK(std::abs(E(0, 1)) == 0.0);

    // 2x2 rotation generator at larger norm exercises the squaring phase
    Matrix R(2, 2);
    R(0, 1) = -7.0;
    R(1, 0) = 7.0;
    const Matrix ER = expm(R);
    CHECK(ER(0, 0) == doctest::Approx(std::cos(7.0)).epsilon(1e-11));
    CHECK(ER(1, 0) == doctest::Approx(std::sin(7.0)).epsilon(1e-11));
}
