#pragma once

#include "carnot_ma/solver.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace carnot_ma {

struct OutputSpec {
    std::string grid_csv;
    std::string report;
    std::optional<std::string> oracle;  // "w_quartic"
};

/// A parsed and validated problem configuration.
struct ProblemSpec {
    DirichletProblem problem;
    OutputSpec outputs;
    std::string fields_summary;
    std::string domain_summary;
    std::string hamiltonian_summary;
    std::string boundary_summary;
};

/// Parses a JSON problem configuration. Every validation failure throws
/// ConfigError with a distinct code and the line of the offending key.
ProblemSpec parse_problem(std::string_view text);
ProblemSpec load_problem(const std::string& path);

/// Stable diagnostic codes raised by parse_problem.
namespace config_codes {
inline constexpr const char* syntax = "config.syntax";
inline constexpr const char* schema_version = "config.schema_version";
inline constexpr const char* not_object = "config.not_object";
inline constexpr const char* fields_missing = "fields.missing";
inline constexpr const char* fields_preset = "fields.unknown_preset";
inline constexpr const char* fields_custom = "fields.bad_custom";
inline constexpr const char* domain_missing = "domain.missing";
inline constexpr const char* domain_preset = "domain.unknown_preset";
inline constexpr const char* domain_radius = "domain.bad_radius";
inline constexpr const char* domain_dimension = "domain.dimension_mismatch";
inline constexpr const char* domain_custom = "domain.bad_custom";
inline constexpr const char* hamiltonian_missing = "hamiltonian.missing";
inline constexpr const char* hamiltonian_kind = "hamiltonian.unknown_kind";
inline constexpr const char* hamiltonian_param = "hamiltonian.bad_parameter";
inline constexpr const char* hamiltonian_expression = "hamiltonian.bad_expression";
inline constexpr const char* boundary_missing = "boundary.missing";
inline constexpr const char* boundary_expression = "boundary.bad_expression";
inline constexpr const char* boundary_samples = "boundary.bad_samples";
inline constexpr const char* grid_h = "grid.bad_h";
inline constexpr const char* grid_frames = "grid.bad_frames";
inline constexpr const char* grid_reach = "grid.bad_reach";
inline constexpr const char* solver_mode = "solver.bad_mode";
inline constexpr const char* solver_tolerance = "solver.bad_tolerance";
inline constexpr const char* solver_iterations = "solver.bad_max_iters";
inline constexpr const char* solver_start = "solver.bad_start";
inline constexpr const char* solver_threads = "solver.bad_threads";
inline constexpr const char* outputs_oracle = "outputs.unknown_oracle";
inline constexpr const char* type = "config.wrong_type";
}  // namespace config_codes

}  // namespace carnot_ma
