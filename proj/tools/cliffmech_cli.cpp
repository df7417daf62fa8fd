// cliffmech command line: verification, symbolic derivation, simulation and
// the anticommutator table over the structure library.
//
// Exit codes: 0 success, 2 usage error, 3 expression parse error,
// 4 integration failure, 5 verification failure, 6 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliffmech/cliffmech.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitIntegration = 4;
constexpr int kExitVerification = 5;
constexpr int kExitIo = 6;

struct RunConfig {
    int n = 1;
    int structure = 1;
    std::string ham;
    std::vector<double> x0;
    double dt = 1e-3;
    long steps = 0;
    std::string method = "midpoint";
    std::string gradient = "symbolic";
    std::string format;
    std::string output;
    double midpoint_tolerance = 1e-12;
    int midpoint_max_iterations = 50;
};

std::vector<double> parse_x0_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty component in --x0");
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad number in --x0: " + item);
    }
    return out;
}

bool flag_provided(const CLI::App& cmd, const std::string& flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
}

// Fills fields that were not given on the command line from the JSON config
// file (flag wins over file).
void merge_config_file(const nlohmann::json& doc, const CLI::App& cmd, RunConfig& cfg) {
    auto absent = [&](const std::string& flag) { return !flag_provided(cmd, flag); };
    if (doc.contains("n") && absent("--n")) cfg.n = doc["n"].get<int>();
    if (doc.contains("structure") && absent("--structure"))
        cfg.structure = doc["structure"].get<int>();
    if (doc.contains("ham") && absent("--ham")) cfg.ham = doc["ham"].get<std::string>();
    if (doc.contains("x0") && absent("--x0")) cfg.x0 = doc["x0"].get<std::vector<double>>();
    if (doc.contains("dt") && absent("--dt")) cfg.dt = doc["dt"].get<double>();
    if (doc.contains("steps") && absent("--steps")) cfg.steps = doc["steps"].get<long>();
    if (doc.contains("method") && absent("--method")) cfg.method = doc["method"].get<std::string>();
    if (doc.contains("gradient") && absent("--gradient"))
        cfg.gradient = doc["gradient"].get<std::string>();
    if (doc.contains("format") && absent("--format")) cfg.format = doc["format"].get<std::string>();
    if (doc.contains("output") && absent("--output")) cfg.output = doc["output"].get<std::string>();
    if (doc.contains("midpoint_tolerance") && absent("--tolerance"))
        cfg.midpoint_tolerance = doc["midpoint_tolerance"].get<double>();
    if (doc.contains("midpoint_max_iterations") && absent("--max-iterations"))
        cfg.midpoint_max_iterations = doc["midpoint_max_iterations"].get<int>();
}

int write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << path << "\n";
        return kExitIo;
    }
    out << text;
    if (!out) {
        std::cerr << "error: failed writing " << path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

std::string diagnostics_path(const std::string& csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() &&
        csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".diagnostics.json";
    return csv_path + ".diagnostics.json";
}

int cmd_verify(const RunConfig& cfg) {
    using namespace cliffmech;
    if (cfg.n < 1) {
        std::cerr << "error: --n must be >= 1\n";
        return kExitUsage;
    }
    const Metric g(cfg.n);
    nlohmann::json checks = nlohmann::json::array();
    bool all_pass = true;
    for (int k = 1; k <= 6; ++k) {
        const auto primal = build_structure(k, cfg.n, Variant::primal);
        const auto dual = build_structure(k, cfg.n, Variant::dual);

        VerificationRecord square = check_square_minus_identity(primal);
        {
            VerificationRecord dual_sq = check_square_minus_identity(dual);
            square.check = "square_minus_identity(J" + std::to_string(k) + ")";
            square.pass = square.pass && dual_sq.pass;
            square.counterexamples.insert(square.counterexamples.end(),
                                          dual_sq.counterexamples.begin(),
                                          dual_sq.counterexamples.end());
        }
        VerificationRecord orth = check_orthogonality(primal, g);
        {
            VerificationRecord dual_orth = check_orthogonality(dual, g);
            orth.check = "orthogonality(J" + std::to_string(k) + ")";
            orth.pass = orth.pass && dual_orth.pass;
            orth.counterexamples.insert(orth.counterexamples.end(),
                                        dual_orth.counterexamples.begin(),
                                        dual_orth.counterexamples.end());
        }
        VerificationRecord dual_match = dual_matches_primal(k, cfg.n);
        VerificationRecord form_identity = structure_form_identity(k, cfg.n);
        VerificationRecord nondegenerate;
        nondegenerate.check = "nondegenerate(Phi_J" + std::to_string(k) + "*)";
        nondegenerate.pass = check_nondegenerate(symplectic_form_of_structure(k, cfg.n));
        if (!nondegenerate.pass)
            nondegenerate.counterexamples.push_back({0, "invertible", "singular"});

        for (const auto* rec : {&square, &orth, &dual_match, &form_identity, &nondegenerate}) {
            all_pass = all_pass && rec->pass;
            checks.push_back(to_json(*rec));
        }
    }

    nlohmann::json report;
    report["n"] = cfg.n;
    report["all_hard_checks_pass"] = all_pass;
    report["hard_checks"] = checks;
    report["anticommutator_table"] = to_json(anticommutator_table(StructureFamily(cfg.n)));

    const int io = write_text(cfg.output, report.dump(2) + "\n");
    if (io != kExitOk) return io;
    if (!cfg.output.empty())
        std::cout << (all_pass ? "verify: all hard checks passed\n" : "verify: FAILURES found\n");
    return all_pass ? kExitOk : kExitVerification;
}

int cmd_derive(const RunConfig& cfg) {
    using namespace cliffmech;
    if (cfg.structure < 1 || cfg.structure > 6) {
        std::cerr << "error: --structure must be in 1..6\n";
        return kExitUsage;
    }
    if (cfg.n < 1) {
        std::cerr << "error: --n must be >= 1\n";
        return kExitUsage;
    }
    const ReportFormat fmt = cfg.format == "latex" ? ReportFormat::latex : ReportFormat::markdown;
    if (!cfg.format.empty() && cfg.format != "latex" && cfg.format != "markdown") {
        std::cerr << "error: --format must be markdown or latex\n";
        return kExitUsage;
    }
    return write_text(cfg.output, derivation_report(cfg.structure, cfg.n, fmt));
}

int cmd_table(const RunConfig& cfg) {
    using namespace cliffmech;
    if (cfg.n < 1) {
        std::cerr << "error: --n must be >= 1\n";
        return kExitUsage;
    }
    if (!cfg.format.empty() && cfg.format != "json" && cfg.format != "markdown") {
        std::cerr << "error: --format must be markdown or json\n";
        return kExitUsage;
    }
    const auto report = anticommutator_table(StructureFamily(cfg.n));
    if (cfg.format == "json") return write_text(cfg.output, to_json(report).dump(2) + "\n");
    return write_text(cfg.output, render_anticommutator_markdown(report));
}

int cmd_simulate(const RunConfig& cfg) {
    using namespace cliffmech;
    if (cfg.n < 1 || cfg.structure < 1 || cfg.structure > 6) {
        std::cerr << "error: --n must be >= 1 and --structure in 1..6\n";
        return kExitUsage;
    }
    if (cfg.ham.empty()) {
        std::cerr << "error: --ham is required for simulate\n";
        return kExitUsage;
    }
    const int dim = 8 * cfg.n;
    if (cfg.x0.size() != static_cast<std::size_t>(dim)) {
        std::cerr << "error: --x0 must have exactly " << dim << " components\n";
        return kExitUsage;
    }
    if (!(cfg.dt > 0.0)) {
        std::cerr << "error: --dt must be > 0\n";
        return kExitUsage;
    }
    if (cfg.steps < 0) {
        std::cerr << "error: --steps must be >= 0\n";
        return kExitUsage;
    }
    if (cfg.method != "midpoint" && cfg.method != "rk4") {
        std::cerr << "error: --method must be midpoint or rk4\n";
        return kExitUsage;
    }
    if (cfg.gradient != "symbolic" && cfg.gradient != "fd") {
        std::cerr << "error: --gradient must be symbolic or fd\n";
        return kExitUsage;
    }

    HamiltonianSystem sys;
    try {
        const Expression H = parse(cfg.ham, dim);
        sys = make_hamiltonian_system(H, cfg.gradient == "fd" ? GradientMode::finite_difference
                                                              : GradientMode::symbolic);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }

    IntegratorConfig icfg;
    icfg.method = cfg.method == "rk4" ? Method::rk4 : Method::implicit_midpoint;
    icfg.dt = cfg.dt;
    icfg.steps = cfg.steps;
    icfg.midpoint_tolerance = cfg.midpoint_tolerance;
    icfg.midpoint_max_iterations = cfg.midpoint_max_iterations;

    const ConstantTwoForm form = symplectic_form_of_structure(cfg.structure, cfg.n);
    PhasePoint x0;
    x0.coordinates = cfg.x0;

    Trajectory traj;
    SimulationDiagnostics diag;
    try {
        traj = integrate(sys, form, x0, icfg);
        const EnergyDrift drift = energy_drift(traj);
        diag.method = icfg.method;
        diag.dt = icfg.dt;
        diag.steps = icfg.steps;
        diag.max_energy_drift = drift.max_drift;
        diag.drift_slope = drift.slope;
        diag.symplecticity_residual = symplecticity_residual(sys, form, x0, icfg);
    } catch (const integration_error& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const evaluation_error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitIntegration;
    }

    const std::string csv = trajectory_csv(traj, dim);
    const std::string diag_text = to_json(diag).dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << csv;
        std::cerr << diag_text;
        return kExitOk;
    }
    int io = write_text(cfg.output, csv);
    if (io != kExitOk) return io;
    io = write_text(diagnostics_path(cfg.output), diag_text);
    if (io != kExitOk) return io;
    std::cout << "trajectory: " << cfg.output << "\n"
              << "diagnostics: " << diagnostics_path(cfg.output) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian mechanics over the six Clifford structure tensors"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string x0_text;
    std::string config_path;

    auto add_common = [&](CLI::App* sub, bool with_sim) {
        sub->add_option("--n", cfg.n, "block size; total dimension is 8n");
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--output", cfg.output, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "output format");
        if (with_sim) {
            sub->add_option("--structure", cfg.structure, "structure index k in 1..6");
            sub->add_option("--ham", cfg.ham, "Hamiltonian expression over x0..x{8n-1}");
            sub->add_option("--x0", x0_text, "initial point, comma-separated");
            sub->add_option("--dt", cfg.dt, "time step");
            sub->add_option("--steps", cfg.steps, "number of steps");
            sub->add_option("--method", cfg.method, "integrator: midpoint or rk4");
            sub->add_option("--gradient", cfg.gradient, "gradient mode: symbolic or fd");
            sub->add_option("--tolerance", cfg.midpoint_tolerance, "midpoint fixed-point tolerance");
            sub->add_option("--max-iterations", cfg.midpoint_max_iterations,
                            "midpoint iteration cap");
        }
    };

    CLI::App* verify = app.add_subcommand("verify", "run every algebraic check at the given n");
    add_common(verify, false);
    CLI::App* derive = app.add_subcommand("derive", "print lambda, Phi and the Hamilton equations");
    add_common(derive, false);
    derive->add_option("--structure", cfg.structure, "structure index k in 1..6");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate a Hamiltonian flow");
    add_common(simulate, true);
    CLI::App* table = app.add_subcommand("table", "anticommutator and composition report");
    add_common(table, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();

    if (config_path.empty()) {
        if (const char* env = std::getenv("CLIFFMECH_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) {
        try {
            merge_config_file(cliffmech::load_json_file(config_path), *sub, cfg);
        } catch (const std::exception& e) {
            std::cerr << "error: bad config file: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    if (!x0_text.empty()) {
        try {
            cfg.x0 = parse_x0_list(x0_text);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    try {
        if (sub == verify) return cmd_verify(cfg);
        if (sub == derive) return cmd_derive(cfg);
        if (sub == simulate) return cmd_simulate(cfg);
        if (sub == table) return cmd_table(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
