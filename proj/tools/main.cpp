// carnot-ma: solve subelliptic Monge-Ampere Dirichlet problems and run the
// verification suites from the command line.

#include "carnot_ma/config.hpp"
#include "carnot_ma/constructions.hpp"
#include "carnot_ma/diagnostics.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/oracle_harness.hpp"
#include "carnot_ma/report.hpp"
#include "carnot_ma/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace carnot_ma;

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, nonconvergence = 3, suite_failure = 4 };

struct Common {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    double h = 0.0;
};

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("CARNOT_MA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // keep the config value
}

std::string output_path(const Common& c, const std::string& configured, const std::string& fallback) {
    const std::string name = configured.empty() ? fallback : configured;
    if (c.out.empty() || fs::path(name).is_absolute()) return name;
    return (fs::path(c.out) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

ProblemSpec load(const Common& c) {
    ProblemSpec spec = load_problem(c.config);
    if (c.h > 0.0) spec.problem.grid.h = c.h;
    if (const int t = resolve_threads(c.threads); t > 0) spec.problem.solver.threads = t;
    return spec;
}

int cmd_solve(const Common& c) {
    ProblemSpec spec = load(c);
    const SolveResult r = solve_dirichlet(spec.problem);
    const std::string csv = output_path(c, spec.outputs.grid_csv, "solution.csv");
    const std::string rep = output_path(c, spec.outputs.report, "report.json");
    if (fs::path(csv).has_parent_path()) fs::create_directories(fs::path(csv).parent_path());
    write_grid_csv(csv, r.u);
    write_text(rep, solve_report_json(r.report, &spec));

    std::printf("nodes %zu  h %.4g  reach %.4g  start %s\n", r.report.nodes, r.report.h, r.report.reach,
                to_string(r.report.start_used).c_str());
    std::printf("iterations %d  converged %s  max residual %.3e  max update %.3e  violations %zu  (%.2f s)\n",
                r.report.iterations, r.report.converged ? "yes" : "no", r.report.final_max_residual,
                r.report.final_max_update, r.report.monotonicity_violations, r.report.seconds);
    if (r.report.oracle_error) std::printf("oracle error (max norm) %.6e\n", *r.report.oracle_error);
    std::printf("wrote %s and %s\n", csv.c_str(), rep.c_str());
    return r.report.converged ? ok : nonconvergence;
}

std::map<std::string, std::uint64_t> stored_seeds(const std::string& path, double* solver_h) {
    std::map<std::string, std::uint64_t> seeds;
    std::ifstream f(path);
    if (!f) return seeds;
    const nlohmann::json j = nlohmann::json::parse(f);
    if (j.contains("solver_h")) *solver_h = j.at("solver_h").get<double>();
    if (j.contains("seeds")) {
        for (const auto& [k, v] : j.at("seeds").items()) seeds[k] = v.get<std::uint64_t>();
    }
    return seeds;
}

int cmd_suites(const Common& c, std::vector<std::string> names, const std::string& seeds_path) {
    if (names.empty()) names = suite_names();
    for (const std::string& n : names) default_suite_seed(n);
    double solver_h = 0.1;
    const auto seeds = stored_seeds(seeds_path, &solver_h);
    if (c.h > 0.0) solver_h = c.h;
    const int threads = std::max(resolve_threads(c.threads), 1);

    std::vector<std::future<SuiteResult>> jobs;
    for (const std::string& n : names) {
        SuiteOptions o;
        o.solver_h = solver_h;
        o.threads = threads;
        if (c.seed_set) {
            o.seed = c.seed;
        } else if (const auto it = seeds.find(n); it != seeds.end()) {
            o.seed = it->second;
        }
        jobs.push_back(std::async(std::launch::async, [n, o] { return run_suite(n, o); }));
    }
    std::vector<SuiteResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    std::cout << suite_table(results);
    if (!c.out.empty()) write_text(output_path(c, "", "suites.json"), suite_report_json(results));
    const bool pass = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.pass; });
    return pass ? ok : suite_failure;
}

int cmd_barriers(const Common& c) {
    const ProblemSpec spec = load(c);
    const DirichletProblem& p = spec.problem;
    if (!p.boundary.smooth) throw InputError("barriers need a boundary datum with exact jets (an expression g)");
    BarrierOptions bo;
    if (c.seed_set) bo.seed = c.seed;
    const LowerBarrier lb = lower_barrier(p.domain, *p.boundary.smooth, p.family, p.hamiltonian, bo);
    std::optional<UpperBarrier> ub;
    try {
        ub = upper_barrier(p.domain, *p.boundary.smooth, p.family, UpperBarrierKind::automatic, bo);
    } catch (const UnsupportedError& e) {
        std::fprintf(stderr, "upper barrier: %s\n", e.what());
    }

    const auto grid = Grid::build(p.domain, p.family, p.grid);
    std::ostringstream csv;
    csv.precision(17);
    for (int i = 0; i < p.family.n(); ++i) csv << "x" << (i + 1) << ",";
    csv << "lower,upper\n";
    for (std::int32_t id : grid->interior()) {
        const Vec x = grid->coordinates(id);
        for (int i = 0; i < x.size(); ++i) csv << x(i) << ",";
        if (lb.accepted) {
            csv << lb.w.value(x);
        } else {
            csv << "nan";
        }
        csv << "," << (ub ? ub->W.value(x) : std::numeric_limits<double>::quiet_NaN()) << "\n";
    }
    write_text(output_path(c, "", "barriers.csv"), csv.str());
    const std::string json = barrier_report_json(lb, ub, spec);
    write_text(output_path(c, "", "barriers.json"), json);
    std::cout << json;
    return ok;
}

int cmd_characteristic(const Common& c) {
    const ProblemSpec spec = load(c);
    const DirichletProblem& p = spec.problem;
    const std::vector<Vec> samples = p.domain.boundary_samples(400, c.seed_set ? c.seed : 29);
    const std::vector<Vec> pts = characteristic_points(p.domain, p.family, samples);
    std::printf("%zu characteristic point(s)\n", pts.size());
    for (const Vec& x : pts) {
        for (int i = 0; i < x.size(); ++i) std::printf("%s% .12f", i ? " " : "", x(i));
        std::printf("\n");
    }
    if (!c.out.empty()) write_text(output_path(c, "", "characteristic.json"), characteristic_report_json(pts, spec));
    return ok;
}

int cmd_info(const Common& c) {
    const ProblemSpec spec = load(c);
    std::cout << info_report_json(inspect_problem(spec), spec);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subelliptic Monge-Ampere solver and verification suites"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    Common c;
    std::vector<std::string> suite_list;
    std::string seeds_path = CARNOT_MA_DEFAULT_SUITES;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", c.config, "problem configuration (JSON)");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "output directory");
        sub->add_option("--seed", c.seed, "override the sampling seed")->each([&](const std::string&) { c.seed_set = true; });
        sub->add_option("--threads", c.threads, "worker threads (falls back to CARNOT_MA_THREADS)")->check(CLI::PositiveNumber);
        sub->add_option("--h", c.h, "grid spacing override")->check(CLI::PositiveNumber);
    };
    CLI::App* solve = app.add_subcommand("solve", "solve the Dirichlet problem; writes grid CSV and report");
    add_common(solve, true);
    CLI::App* suites = app.add_subcommand("suites", "run verification suites");
    add_common(suites, false);
    suites->add_option("names", suite_list, "suites to run (default: all)");
    suites->add_option("--seeds", seeds_path, "seed table");
    CLI::App* barriers = app.add_subcommand("barriers", "construct lower and upper barriers, sampled to CSV");
    add_common(barriers, true);
    CLI::App* characteristic = app.add_subcommand("characteristic", "list characteristic boundary points");
    add_common(characteristic, true);
    CLI::App* info = app.add_subcommand("info", "problem summary and structural checks");
    add_common(info, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    try {
        if (*solve) return cmd_solve(c);
        if (*suites) return cmd_suites(c, suite_list, seeds_path);
        if (*barriers) return cmd_barriers(c);
        if (*characteristic) return cmd_characteristic(c);
        if (*info) return cmd_info(c);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s: error [%s]: %s\n", c.config.c_str(), e.code().c_str(), e.what());
        return validation;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return validation;
    } catch (const UnsupportedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return validation;
    } catch (const PerronEmptyError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return nonconvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return validation;
    }
    return usage;
}
