#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "slp/assembly.hpp"

namespace slp {

struct ConfigError : std::runtime_error {
    ConfigError(int line, std::string field, const std::string& what)
        : std::runtime_error(field.empty()
                                 ? "line " + std::to_string(line) + ": " + what
                                 : "line " + std::to_string(line) + ": field '" + field +
                                       "': " + what),
          line(line),
          field(std::move(field)) {}
    int line;
    std::string field;
};

struct CoefficientConfig {
    /// Primitive breakpoints (x, W(x)); must start at (0, 0) and end at x = 1
    /// when present. Empty means the zero density.
    std::vector<std::pair<double, double>> primitive;
    std::vector<Atom> atoms;
};

/// Flat key = value problem description; see README for the key list.
struct ProblemConfig {
    int mesh_cells = 100;

    double p_default = 1.0;
    std::vector<std::array<double, 3>> p_pieces;  // {from, to, value}

    CoefficientConfig q;
    CoefficientConfig r{{{0.0, 0.0}, {1.0, 1.0}}, {}};  // Lebesgue by default

    std::optional<BcKind> bc_kind;
    double robin_c = 0.0;
    std::optional<std::pair<double, double>> u_angles;  // multiples of pi

    int solver_count = 5;
    double solver_tol = 1e-10;

    std::vector<double> eps_scales{1e-1, 1e-2, 1e-3};
    double ztol = 1e-8;
    int trials = 100;
    std::uint64_t seed = 42;
    int chebyshev_max = 4;
    double invariance_tol = 1e-3;
};

ProblemConfig parse_config_text(const std::string& text);
ProblemConfig parse_config_file(const std::string& path);

/// Builds the meshed problem: required nodes are collected from the
/// coefficient breakpoints and atom locations, boundary data given as U
/// angles is canonicalized into endpoint atoms.
Problem build_problem(const ProblemConfig& cfg);

}  // namespace slp
