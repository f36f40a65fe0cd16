#pragma once

#include "carnot_ma/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace carnot_ma {

/// One measured quantity against its limit. Upper-bound checks pass when
/// value <= limit, lower-bound checks when value >= limit.
struct SuiteCheck {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool lower_bound = false;

    /// value / limit (upper) or limit / value (lower); <= 1 means pass.
    /// A zero limit on an upper bound gives 0 for value <= 0 and +inf otherwise.
    double margin() const;
    bool pass() const { return margin() <= 1.0; }
};

struct SuiteResult {
    std::string suite;
    std::size_t checks_run = 0;
    double worst_margin = 0.0;
    bool pass = false;
    std::vector<SuiteCheck> checks;
    double seconds = 0.0;
};

struct SuiteOptions {
    std::optional<std::uint64_t> seed;  // overrides the suite's fixed seed
    double solver_h = 0.1;
    int threads = 1;
};

/// identities, representations, inequalities, convexity, constructions,
/// solver_oracle, comparison.
const std::vector<std::string>& suite_names();

/// Fixed seed of a suite (mirrored in configs/suites.json).
std::uint64_t default_suite_seed(const std::string& name);

/// Tolerance table shared by the suites and the acceptance run.
namespace tolerances {
inline constexpr double identity = 1e-10;
inline constexpr double equation_residual = 1e-9;
inline constexpr double norm_oracle = 1e-10;
inline constexpr double representation = 1e-10;
inline constexpr double inequality = 1e-10;
inline constexpr double fd_order = 1.8;
inline constexpr double barrier_convexity = 1e-8;
inline constexpr double barrier_residual = 1e-8;
inline constexpr double barrier_boundary = 1e-12;
inline constexpr double strict_modulus = 1e-8;
inline constexpr double strict_linear_slope = 0.05;
inline constexpr double characteristic = 1e-8;
/// Max-norm error allowed for the MAHeis solve at spacing h (refinement study on
/// h in {0.2, 0.1, 0.05} measured 0.12, 0.076, 0.030).
inline double solver_error(double h) { return h; }
}  // namespace tolerances

/// Throws InputError for an unknown name. Deterministic for fixed options.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options = {});

/// Runs the suites concurrently; results keep the order of `names`.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const SuiteOptions& options = {});

/// Dirichlet problem -det D^2_X u + 144 (x1^2 + x2^2)^2 = 0 on the unit gauge
/// ball of H^1 with u = 1 on the boundary; exact solution w = |x|_H^4.
DirichletProblem koranyi_maheis_problem(double h);

}  // namespace carnot_ma
