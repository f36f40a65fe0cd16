#pragma once

#include "carnot_ma/domain.hpp"
#include "carnot_ma/fields.hpp"
#include "carnot_ma/grid.hpp"
#include "carnot_ma/hamiltonian.hpp"
#include "carnot_ma/scheme.hpp"

#include <optional>
#include <string>
#include <vector>

namespace carnot_ma {

/// Boundary datum. `g` must be defined on the closed domain and on the
/// lattice nodes just outside it; sample-only data is turned into a global
/// polynomial by from_samples().
struct BoundaryData {
    ScalarField g;
    std::optional<SmoothFunction> smooth;  // C^2 extension with jets, when available
    double fit_error = 0.0;                // uniform error of the polynomial fit
    int fit_degree = -1;

    static BoundaryData from_function(ScalarField g);
    static BoundaryData from_smooth(SmoothFunction g);
    /// Least-squares polynomial in x1..xn, degree raised from 0 up to max_degree
    /// until the uniform error on the samples is below tol_g.
    static BoundaryData from_samples(const std::vector<Vec>& points, const std::vector<double>& values,
                                     double tol_g = 1e-6, int max_degree = 10);
};

enum class SweepMode { gauss_seidel, jacobi };
enum class StartKind { automatic, constant, lower_barrier, exponential, user };

std::string to_string(SweepMode mode);
std::string to_string(StartKind kind);

struct SolverOptions {
    SweepMode mode = SweepMode::gauss_seidel;
    double tol_update = 1e-8;
    double tol_res = 1e-6;
    int max_iters = 200000;
    int threads = 1;
    GradientMode gradient = GradientMode::automatic;
    StartKind start = StartKind::automatic;
    bool record_sweeps = false;
};

struct DirichletProblem {
    FieldFamily family;
    DomainSpec domain;
    Hamiltonian hamiltonian;
    BoundaryData boundary;
    GridOptions grid;
    SolverOptions solver;
    std::optional<ScalarField> oracle;
    std::optional<ScalarField> user_start;  // for StartKind::user
};

struct SweepRecord {
    double max_update = 0.0;
    double max_residual = 0.0;
    double min_update = 0.0;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    double final_max_residual = 0.0;
    double final_max_update = 0.0;
    std::optional<double> oracle_error;
    std::size_t monotonicity_violations = 0;
    std::vector<Vec> characteristic_points;
    StartKind start_used = StartKind::automatic;
    bool start_certified = false;
    double start_parameter = 0.0;  // mu of the exponential start, lambda of the barrier
    std::size_t nodes = 0;
    double h = 0.0;
    double reach = 0.0;
    double seconds = 0.0;
    std::vector<SweepRecord> sweeps;
};

struct SolveResult {
    GridFunction u;
    SolveReport report;
};

/// Monotone iteration of the wide-stencil scheme from a discrete subsolution.
/// Throws PerronEmptyError when no start is certified.
SolveResult solve_dirichlet(const DirichletProblem& problem);

/// Same on a prebuilt grid.
SolveResult solve_dirichlet(const DirichletProblem& problem, std::shared_ptr<const Grid> grid);

/// Largest discrete residual of `u` over interior nodes.
double max_scheme_residual(const Scheme& scheme, const GridFunction& u);

/// Boundary closure of `u` from g and interior values from f.
GridFunction grid_function_from(std::shared_ptr<const Grid> grid, const ScalarField& interior,
                                const ScalarField& boundary);

}  // namespace carnot_ma
