#include "carnot_ma/report.hpp"

#include "carnot_ma/diagnostics.hpp"
#include "carnot_ma/fields.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace carnot_ma {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; encode non-finite numbers as null.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json point(const Vec& x) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < x.size(); ++i) a.push_back(x(i));
    return a;
}

ordered_json header(const char* kind) {
    ordered_json j;
    j["schema_version"] = report_schema_version;
    j["kind"] = kind;
    return j;
}

ordered_json problem(const ProblemSpec& s) {
    ordered_json p;
    p["fields"] = s.fields_summary;
    p["domain"] = s.domain_summary;
    p["hamiltonian"] = s.hamiltonian_summary;
    p["boundary"] = s.boundary_summary;
    p["h"] = s.problem.grid.h;
    p["frames_K"] = s.problem.grid.frames_K;
    p["anisotropic_t"] = s.problem.grid.anisotropic_t;
    p["mode"] = to_string(s.problem.solver.mode);
    return p;
}

}  // namespace

std::string solve_report_json(const SolveReport& r, const ProblemSpec* spec) {
    ordered_json j = header("solve");
    if (spec) j["problem"] = problem(*spec);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["final_max_residual"] = num(r.final_max_residual);
    j["final_max_update"] = num(r.final_max_update);
    j["oracle_error"] = r.oracle_error ? num(*r.oracle_error) : ordered_json(nullptr);
    j["monotonicity_violations"] = r.monotonicity_violations;
    j["start"] = {{"kind", to_string(r.start_used)}, {"certified", r.start_certified}, {"parameter", num(r.start_parameter)}};
    j["nodes"] = r.nodes;
    j["h"] = r.h;
    j["reach"] = r.reach;
    j["seconds"] = r.seconds;
    ordered_json pts = ordered_json::array();
    for (const Vec& x : r.characteristic_points) pts.push_back(point(x));
    j["characteristic_points"] = pts;
    if (!r.sweeps.empty()) {
        ordered_json sw = ordered_json::array();
        for (const SweepRecord& s : r.sweeps) {
            sw.push_back({num(s.max_update), num(s.max_residual), num(s.min_update)});
        }
        j["sweeps"] = {{"columns", {"max_update", "max_residual", "min_update"}}, {"rows", sw}};
    }
    return j.dump(2) + "\n";
}

std::string suite_report_json(const std::vector<SuiteResult>& results) {
    ordered_json j = header("suites");
    bool all = true;
    ordered_json arr = ordered_json::array();
    for (const SuiteResult& r : results) {
        all = all && r.pass;
        ordered_json checks = ordered_json::array();
        for (const SuiteCheck& c : r.checks) {
            checks.push_back({{"name", c.name},
                              {"value", num(c.value)},
                              {"limit", num(c.limit)},
                              {"bound", c.lower_bound ? "lower" : "upper"},
                              {"margin", num(c.margin())},
                              {"pass", c.pass()}});
        }
        arr.push_back({{"suite", r.suite},
                       {"checks_run", r.checks_run},
                       {"worst_margin", num(r.worst_margin)},
                       {"pass", r.pass},
                       {"seconds", r.seconds},
                       {"checks", checks}});
    }
    j["pass"] = all;
    j["suites"] = arr;
    return j.dump(2) + "\n";
}

std::string suite_table(const std::vector<SuiteResult>& results) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-44s %12s %12s %10s  %s\n", "suite", "check", "value", "limit", "margin",
                  "result");
    os << line;
    for (const SuiteResult& r : results) {
        for (const SuiteCheck& c : r.checks) {
            std::snprintf(line, sizeof line, "%-16s %-44s %12.4g %2s%10.3g %10.3g  %s\n", r.suite.c_str(),
                          c.name.c_str(), c.value, c.lower_bound ? ">=" : "<=", c.limit, c.margin(),
                          c.pass() ? "pass" : "FAIL");
            os << line;
        }
        std::snprintf(line, sizeof line, "%-16s %-44s %12s %12s %10.3g  %s (%.2f s)\n", r.suite.c_str(), "(suite)", "",
                      "", r.worst_margin, r.pass ? "PASS" : "FAIL", r.seconds);
        os << line;
    }
    return os.str();
}

std::string barrier_report_json(const LowerBarrier& lower, const std::optional<UpperBarrier>& upper,
                                const ProblemSpec& spec) {
    ordered_json j = header("barriers");
    j["problem"] = problem(spec);
    j["lower"] = {{"accepted", lower.accepted},
                  {"diagnostic", lower.diagnostic},
                  {"mu", num(lower.params.mu)},
                  {"lambda", num(lower.params.lambda)},
                  {"c", num(lower.params.c)},
                  {"gamma", num(lower.params.gamma)},
                  {"K", num(lower.params.K)},
                  {"min_lambda", num(lower.min_lambda)},
                  {"max_residual", num(lower.max_residual)},
                  {"max_boundary_gap", num(lower.max_boundary_gap)},
                  {"doublings", lower.doublings}};
    if (upper) {
        static const char* kinds[] = {"automatic", "zero", "convex_pair", "uniform", "constant"};
        j["upper"] = {{"kind", kinds[static_cast<int>(upper->kind)]},
                      {"lambda", num(upper->lambda)},
                      {"max_lambda_max", num(upper->max_lambda_max)},
                      {"certified", upper->certified}};
    } else {
        j["upper"] = nullptr;
    }
    return j.dump(2) + "\n";
}

std::string characteristic_report_json(const std::vector<Vec>& points, const ProblemSpec& spec) {
    ordered_json j = header("characteristic");
    j["problem"] = problem(spec);
    ordered_json arr = ordered_json::array();
    for (const Vec& x : points) {
        arr.push_back({{"point", point(x)},
                       {"defect", num(characteristic_defect(spec.problem.domain, spec.problem.family, x))}});
    }
    j["count"] = points.size();
    j["points"] = arr;
    return j.dump(2) + "\n";
}

ProblemInfo inspect_problem(const ProblemSpec& spec) {
    const DirichletProblem& p = spec.problem;
    const int m = p.family.m();
    ProblemInfo info;
    const std::vector<Vec> interior = p.domain.interior_samples(500, 41);
    const std::vector<Vec> boundary = p.domain.boundary_samples(400, 43);
    const std::span<const Vec> xs = std::span<const Vec>(interior).first(std::min<std::size_t>(64, interior.size()));

    info.carnot_type = validate_carnot_type(p.family, interior).valid;
    info.xsquare_convex = xsquare_margin(p.family, interior) > 0.0;
    double g_max = 0.0;
    for (const Vec& z : boundary) g_max = std::max(g_max, std::abs(p.boundary.g(z)));
    const std::vector<double> radii = default_growth_radii();
    info.growth = growth_check(p.hamiltonian, m, g_max, xs, radii, 47);
    info.lipschitz = lipschitz_root_check(p.hamiltonian, m, g_max + 4.0, xs, 2000, 53);
    info.hamiltonian = check_hamiltonian(p.hamiltonian, m, xs, g_max + 4.0, 4.0, 2000, 59);
    std::vector<Vec> all = interior;
    all.insert(all.end(), boundary.begin(), boundary.end());
    info.domain_gamma = domain_convexity_constant(p.domain, p.family, all);
    info.characteristic_points = characteristic_points(p.domain, p.family, boundary).size();
    const auto grid = Grid::build(p.domain, p.family, p.grid);
    info.grid_nodes = grid->interior().size();
    info.grid_reach = grid->reach();
    return info;
}

std::string info_report_json(const ProblemInfo& info, const ProblemSpec& spec) {
    ordered_json j = header("info");
    j["problem"] = problem(spec);
    j["carnot_type"] = info.carnot_type;
    j["xsquare_convex"] = info.xsquare_convex;
    j["growth"] = {{"passes", info.growth.passes}, {"L", num(info.growth.L)}, {"M", num(info.growth.M)}};
    j["lipschitz"] = {{"passes", info.lipschitz.passes}, {"L", num(info.lipschitz.L)}, {"samples", info.lipschitz.samples}};
    j["hamiltonian_samples"] = {{"samples", info.hamiltonian.samples},
                                {"negative_values", info.hamiltonian.negative_values},
                                {"monotonicity_violations", info.hamiltonian.monotonicity_violations}};
    j["domain_gamma"] = num(info.domain_gamma);
    j["uniformly_x_convex"] = info.domain_gamma > 0.0;
    j["characteristic_points"] = info.characteristic_points;
    j["grid"] = {{"interior_nodes", info.grid_nodes}, {"reach", info.grid_reach}};
    return j.dump(2) + "\n";
}

}  // namespace carnot_ma
