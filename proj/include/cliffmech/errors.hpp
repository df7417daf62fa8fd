#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliffmech {

/// Location and context of a parse failure inside a Hamiltonian expression.
struct ParseDiagnostics {
    std::size_t offset = 0;                // byte offset, <= input length (EOF allowed)
    std::string message;
    std::vector<std::string> expected;     // token classes that would have been accepted
};

class parse_error : public std::runtime_error {
public:
    explicit parse_error(ParseDiagnostics diag)
        : std::runtime_error(diag.message + " (offset " + std::to_string(diag.offset) + ")"),
          diag_(std::move(diag)) {}

    const ParseDiagnostics& diagnostics() const noexcept { return diag_; }

private:
    ParseDiagnostics diag_;
};

/// Runtime failure while evaluating an expression (division by zero, domain error).
/// Carries a printed form of the offending subtree.
class evaluation_error : public std::runtime_error {
public:
    evaluation_error(const std::string& what, std::string subtree)
        : std::runtime_error(what + ": " + subtree), subtree_(std::move(subtree)) {}

    const std::string& subtree() const noexcept { return subtree_; }

private:
    std::string subtree_;
};

/// Attempt to solve against a degenerate 2-form.
class singular_system_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside a fixed-step integration, reported with the step it happened at.
class integration_error : public std::runtime_error {
public:
    enum class Kind { non_convergence, divergence };

    integration_error(Kind kind, std::size_t step, const std::string& what)
        : std::runtime_error(what + " at step " + std::to_string(step)),
          kind_(kind),
          step_(step) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t step() const noexcept { return step_; }

private:
    Kind kind_;
    std::size_t step_;
};

}  // namespace cliffmech
