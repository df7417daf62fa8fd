#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliffmech/dynamics.hpp"
#include "cliffmech/forms.hpp"
#include "cliffmech/structure.hpp"

// Rendering: derivation reports in markdown or LaTeX with blocks written the
// way the coordinate layout names them (x_i, x_{n+i}, ..., x_{7n+i}),
// verification records as JSON, the anticommutator table in markdown/JSON,
// trajectory CSV and the diagnostics JSON. All output is deterministic:
// no timestamps, fixed field order.

namespace cliffmech {

enum class ReportFormat { csv, json, markdown, latex };

namespace detail {

inline std::string block_name(int b, bool latex) {
    if (b == 0) return latex ? "x_{i}" : "x_i";
    if (b == 1) return "x_{n+i}";
    return "x_{" + std::to_string(b) + "n+i}";
}

inline std::string rational_str(const Rational& r, bool latex) {
    if (latex && !r.is_integer())
        return std::string(r.num() < 0 ? "-" : "") + "\\frac{" +
               std::to_string(r.num() < 0 ? -r.num() : r.num()) + "}{" +
               std::to_string(r.den()) + "}";
    return r.str();
}

inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Renders a block-homogeneous 1-form as signed block terms, e.g.
/// "1/2( x_i dx_{4n+i} - x_{n+i} dx_{2n+i} + ... )". The form must carry the
/// same coefficient on every coordinate of a block.
inline std::string render_one_form(const LinearOneForm& f, bool latex) {
    const int n = f.n();
    std::string body;
    bool first = true;
    Rational common(0);
    bool common_set = false;
    for (int b = 0; b < 8; ++b) {
        for (int t = 0; t < 8; ++t) {
            const Rational& c = f.linear(b * n, t * n);
            if (c.is_zero()) continue;
            if (!common_set) {
                common = c.num() < 0 ? -c : c;
                common_set = true;
            }
            const Rational unit = c / common;
            std::string sign = unit.num() < 0 ? " - " : (first ? "" : " + ");
            std::string mag = (unit == Rational(1) || unit == Rational(-1))
                                  ? ""
                                  : detail::rational_str(unit.num() < 0 ? -unit : unit, latex) + " ";
            body += sign + mag + detail::block_name(b, latex) +
                    (latex ? "\\,d" : " d") + detail::block_name(t, latex);
            first = false;
        }
    }
    if (!common_set) return "0";
    const std::string factor = detail::rational_str(common, latex);
    if (common == Rational(1)) return body;
    return factor + (latex ? "\\left( " : "( ") + body + (latex ? " \\right)" : " )");
}

/// Renders a block-level 2-form as wedge terms with +1 orientation, e.g.
/// "dx_{n+i} ^ dx_{2n+i} + dx_{3n+i} ^ dx_{7n+i} + ...".
inline std::string render_two_form(const ConstantTwoForm& form, bool latex) {
    const int n = form.n();
    std::string out;
    std::vector<char> done(64, 0);
    bool first = true;
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            if (a == b || done[a * 8 + b] || done[b * 8 + a]) continue;
            const Rational& v = form.at(a * n, b * n);
            if (v != Rational(1)) continue;
            done[a * 8 + b] = done[b * 8 + a] = 1;
            if (!first) out += " + ";
            out += "d" + detail::block_name(a, latex) + (latex ? " \\wedge d" : " ^ d") +
                   detail::block_name(b, latex);
            first = false;
        }
    }
    return first ? "0" : out;
}

/// One Hamilton equation per block in the layout's notation.
inline std::vector<std::string> render_equations(const EquationSet& set, bool latex) {
    std::vector<std::string> lines;
    for (const auto& r : set.records) {
        const std::string lhs = detail::block_name(r.lhs_block, latex);
        const std::string rhs = detail::block_name(r.rhs_block, latex);
        if (latex) {
            lines.push_back("\\frac{d" + lhs + "}{dt} = " + (r.sign < 0 ? "-" : "") +
                            "\\frac{\\partial H}{\\partial " + rhs + "}");
        } else {
            lines.push_back("d" + lhs + "/dt = " + (r.sign < 0 ? "-" : "") + "dH/d" + rhs);
        }
    }
    return lines;
}

/// Full derivation report for structure k: omega, lambda, Phi and the eight
/// Hamilton equations.
inline std::string derivation_report(int k, int n, ReportFormat format) {
    const bool latex = format == ReportFormat::latex;
    const LinearOneForm omega = canonical_one_form(n);
    const LinearOneForm lambda = liouville_form(k, n);
    const ConstantTwoForm phi = symplectic_form_of_structure(k, n);
    const EquationSet set = symbolic_equations(k);

    std::string out;
    const std::string Jk = "J" + std::to_string(k);
    if (latex) {
        out += "% Hamiltonian derivation for structure " + Jk + "^* (n = " + std::to_string(n) + ")\n";
        out += "\\omega = " + render_one_form(omega, true) + "\n";
        out += "\\lambda_{" + Jk + "^*} = " + render_one_form(lambda, true) + "\n";
        out += "\\Phi_{" + Jk + "^*} = -d\\lambda_{" + Jk + "^*} = " + render_two_form(phi, true) + "\n";
        out += "% constant coefficients, so d\\Phi = 0 and \\Phi is closed\n";
        out += "% Hamilton equations\n";
        for (const auto& line : render_equations(set, true)) out += line + " \\\\\n";
    } else {
        out += "# Hamiltonian derivation for structure " + Jk + "* (n = " + std::to_string(n) + ")\n\n";
        out += "omega = " + render_one_form(omega, false) + "\n\n";
        out += "lambda_{" + Jk + "*} = " + render_one_form(lambda, false) + "\n\n";
        out += "Phi_{" + Jk + "*} = -d lambda_{" + Jk + "*} = " + render_two_form(phi, false) + "\n\n";
        out += "Phi has constant coefficients, so dPhi = 0: the form is closed, and "
               "nondegeneracy makes it symplectic.\n\n";
        out += "Hamilton equations:\n\n";
        for (const auto& line : render_equations(set, false)) out += "- " + line + "\n";
    }
    return out;
}

inline nlohmann::json to_json(const VerificationRecord& rec) {
    nlohmann::json out;
    out["check"] = rec.check;
    out["pass"] = rec.pass;
    out["counterexamples"] = nlohmann::json::array();
    for (const auto& ce : rec.counterexamples) {
        out["counterexamples"].push_back(
            {{"index", ce.basis_index}, {"expected", ce.expected}, {"actual", ce.actual}});
    }
    return out;
}

inline nlohmann::json to_json(const AnticommutatorReport& report) {
    nlohmann::json out;
    out["n"] = report.n;
    out["pairs"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : e.block_matrix) rows.push_back(row);
        out["pairs"].push_back({{"i", e.i},
                                {"j", e.j},
                                {"clifford_relation_holds", e.clifford_relation_holds},
                                {"product_class", e.product_class},
                                {"block_matrix", rows}});
    }
    return out;
}

/// Markdown rendering of the 6x6 pair table; the same data as to_json.
inline std::string render_anticommutator_markdown(const AnticommutatorReport& report) {
    std::string out = "# Anticommutator table (n = " + std::to_string(report.n) + ")\n\n";
    out += "| pair | J_iJ_j + J_jJ_i = -2*delta*I | J_iJ_j |\n";
    out += "|------|------------------------------|--------|\n";
    for (const auto& e : report.entries) {
        out += "| (" + std::to_string(e.i) + "," + std::to_string(e.j) + ") | " +
               (e.clifford_relation_holds ? "holds" : "fails") + " | " + e.product_class + " |\n";
    }
    return out;
}

/// Trajectory CSV: header t,x0,...,x{8n-1},H and one full-precision row per
/// recorded point.
inline std::string trajectory_csv(const Trajectory& traj, int dimension) {
    std::string out = "t";
    for (int a = 0; a < dimension; ++a) out += ",x" + std::to_string(a);
    out += ",H\n";
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        out += detail::format_full(traj.points[i].time);
        for (double c : traj.points[i].coordinates) out += "," + detail::format_full(c);
        out += "," + detail::format_full(traj.energy[i]) + "\n";
    }
    return out;
}

struct SimulationDiagnostics {
    Method method = Method::rk4;
    double dt = 0.0;
    long steps = 0;
    double max_energy_drift = 0.0;
    double drift_slope = 0.0;
    double symplecticity_residual = 0.0;
};

inline nlohmann::json to_json(const SimulationDiagnostics& d) {
    return {{"method", to_string(d.method)},
            {"dt", d.dt},
            {"steps", d.steps},
            {"max_energy_drift", d.max_energy_drift},
            {"drift_slope", d.drift_slope},
            {"symplecticity_residual", d.symplecticity_residual}};
}

}  // namespace cliffmech
