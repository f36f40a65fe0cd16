#pragma once

#include "carnot_ma/config.hpp"
#include "carnot_ma/constructions.hpp"
#include "carnot_ma/oracle_harness.hpp"
#include "carnot_ma/operators.hpp"
#include "carnot_ma/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace carnot_ma {

/// Version of the JSON report layout written by the functions below.
inline constexpr int report_schema_version = 1;

/// Structured solve report; `spec` adds the problem summary when given.
std::string solve_report_json(const SolveReport& report, const ProblemSpec* spec = nullptr);

std::string suite_report_json(const std::vector<SuiteResult>& results);

/// Fixed-width pass table, one row per check.
std::string suite_table(const std::vector<SuiteResult>& results);

std::string barrier_report_json(const LowerBarrier& lower, const std::optional<UpperBarrier>& upper,
                                const ProblemSpec& spec);

std::string characteristic_report_json(const std::vector<Vec>& points, const ProblemSpec& spec);

struct ProblemInfo {
    bool carnot_type = false;
    bool xsquare_convex = false;
    GrowthCheckResult growth;
    LipschitzCheckResult lipschitz;
    HamiltonianInvariantReport hamiltonian;
    double domain_gamma = 0.0;  // D^2_X Phi <= -gamma I on the samples
    std::size_t characteristic_points = 0;
    std::size_t grid_nodes = 0;
    double grid_reach = 0.0;
};

/// Runs the structural checks behind `info`.
ProblemInfo inspect_problem(const ProblemSpec& spec);

std::string info_report_json(const ProblemInfo& info, const ProblemSpec& spec);

}  // namespace carnot_ma
