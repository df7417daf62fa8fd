// Minimal tour: build a structure, derive its symplectic form and equations,
// integrate a quadratic Hamiltonian and report the energy drift.

#include <cstdio>

#include "cliffmech/cliffmech.hpp"

int main() {
    using namespace cliffmech;

    const int k = 4;
    std::printf("%s\n", derivation_report(k, 1, ReportFormat::markdown).c_str());

    const auto H = parse("0.5*(x0^2+x1^2+x2^2+x3^2+x4^2+x5^2+x6^2+x7^2)", 8);
    const auto sys = make_hamiltonian_system(H, GradientMode::symbolic);

    PhasePoint start;
    start.coordinates.assign(8, 0.0);
    start.coordinates[0] = 1.0;

    IntegratorConfig cfg;
    cfg.method = Method::implicit_midpoint;
    cfg.dt = 1e-2;
    cfg.steps = 1000;

    const auto traj = integrate(sys, symplectic_form_of_structure(k, 1), start, cfg);
    const auto drift = energy_drift(traj);
    std::printf("integrated %zu points, max energy drift %.3e\n", traj.points.size(),
                drift.max_drift);
    const auto& last = traj.points.back().coordinates;
    std::printf("final point: (%.6f, %.6f, ..., %.6f)\n", last[0], last[1], last[7]);
    return 0;
}
