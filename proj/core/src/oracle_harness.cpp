#include "carnot_ma/oracle_harness.hpp"

#include "carnot_ma/calculus.hpp"
#include "carnot_ma/constructions.hpp"
#include "carnot_ma/convexity.hpp"
#include "carnot_ma/diagnostics.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/operators.hpp"
#include "carnot_ma/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <map>

namespace carnot_ma {

double SuiteCheck::margin() const {
    if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();
    if (lower_bound) {
        if (value >= limit) return value > 0.0 ? limit / value : 0.0;
        return value > 0.0 ? limit / value : std::numeric_limits<double>::infinity();
    }
    if (limit == 0.0) return value <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::max(value, 0.0) / limit;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"identities",   "representations", "inequalities", "convexity",
                                                "constructions", "solver_oracle",   "comparison"};
    return names;
}

std::uint64_t default_suite_seed(const std::string& name) {
    static const std::map<std::string, std::uint64_t> seeds{
        {"identities", 1001},   {"representations", 1002}, {"inequalities", 1003}, {"convexity", 1004},
        {"constructions", 1005}, {"solver_oracle", 1006},   {"comparison", 1007}};
    const auto it = seeds.find(name);
    if (it == seeds.end()) throw InputError("unknown suite '" + name + "'");
    return it->second;
}

DirichletProblem koranyi_maheis_problem(double h) {
    const FieldFamily family = FieldFamily::heisenberg(1);
    const SmoothFunction f = explicit_heisenberg_oracle(HeisenbergOracle::f_144);
    SmoothFunction one{[](const Vec&) { return 1.0; },
                       [](const Vec& x) { return EuclideanJet2{1.0, Vec::Zero(x.size()), Mat::Zero(x.size(), x.size())}; }};
    GridOptions grid;
    grid.h = h;
    return DirichletProblem{family,
                            DomainSpec::koranyi_ball(1.0, 1),
                            Hamiltonian::source_term(f.value),
                            BoundaryData::from_smooth(one),
                            grid,
                            SolverOptions{},
                            explicit_heisenberg_oracle(HeisenbergOracle::w_quartic).value,
                            std::nullopt};
}

namespace {

using Checks = std::vector<SuiteCheck>;

void upper(Checks& out, std::string name, double value, double limit) {
    out.push_back({std::move(name), value, limit, false});
}

void lower(Checks& out, std::string name, double value, double limit) {
    out.push_back({std::move(name), value, limit, true});
}

double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

double psi_of(const Vec& x) { return x(0) * x(0) + x(1) * x(1); }

void identities(Checks& out, std::uint64_t seed) {
    const FieldFamily fam = FieldFamily::heisenberg(1);
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const std::vector<Vec> pts = ball.interior_samples(1000, seed);
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    const SmoothFunction k = explicit_heisenberg_oracle(HeisenbergOracle::k_H);
    const SmoothFunction f = explicit_heisenberg_oracle(HeisenbergOracle::f_144);
    const Hamiltonian ma = Hamiltonian::source_term(f.value);
    const Hamiltonian gauss = Hamiltonian::gauss([kv = k.value](const Vec& x, double) { return kv(x); }, 2);

    double e_grad = 0.0, e_hess = 0.0, e_norm = 0.0, e_curv = 0.0, r_ma = 0.0, r_gauss = 0.0;
    for (const Vec& x : pts) {
        const double psi = psi_of(x);
        const double t = x(2);
        const double wv = psi * psi + t * t;
        const HorizontalJet j = horizontal_jet_exact(fam, x, w.jet(x));
        Vec g(2);
        g << 4.0 * psi * x(0) + 4.0 * t * x(1), 4.0 * psi * x(1) - 4.0 * t * x(0);
        e_grad = std::max(e_grad, (j.h_gradient - g).cwiseAbs().maxCoeff());
        e_hess = std::max(e_hess, max_abs(j.h_hessian - 12.0 * psi * Mat::Identity(2, 2)));
        e_norm = std::max(e_norm, std::abs(j.h_gradient.squaredNorm() - 16.0 * psi * wv));
        e_curv = std::max(e_curv, std::abs(gauss_curvature(j) - k.value(x)));
        r_ma = std::max(r_ma, std::abs(ma_residual(OperatorForm::det, x, j.value, j, ma)));
        r_gauss = std::max(r_gauss, std::abs(ma_residual(OperatorForm::det, x, j.value, j, gauss)));
    }
    upper(out, "horizontal_gradient_of_w", e_grad, tolerances::identity);
    upper(out, "horizontal_hessian_of_w", e_hess, tolerances::identity);
    upper(out, "gradient_norm_of_w", e_norm, tolerances::identity);
    upper(out, "gauss_curvature_of_w", e_curv, tolerances::identity);
    upper(out, "ma_heis_residual", r_ma, tolerances::equation_residual);
    upper(out, "gauss_heis_residual", r_gauss, tolerances::equation_residual);

    // Finite-difference consistency: observed order over h, h/2, h/4.
    const std::vector<Vec> fd_pts(pts.begin(), pts.begin() + 200);
    const double hs[3] = {0.1, 0.05, 0.025};
    double err[3] = {0.0, 0.0, 0.0};
    for (int l = 0; l < 3; ++l) {
        for (const Vec& x : fd_pts) {
            const HorizontalJet ex = horizontal_jet_exact(fam, x, w.jet(x));
            const HorizontalJet fd = horizontal_jet_fd(w.value, fam, x, hs[l]);
            err[l] = std::max({err[l], (fd.h_gradient - ex.h_gradient).cwiseAbs().maxCoeff(),
                               max_abs(fd.h_hessian - ex.h_hessian)});
        }
    }
    const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    lower(out, "fd_jet_order", order, tolerances::fd_order);
}

void representations(Checks& out, std::uint64_t seed) {
    Rng rng(seed);
    double e_root = 0.0, e_log = 0.0, beat_root = 0.0, beat_log = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int n = i < 500 ? 2 : 3;
        const Mat a = rng.symmetric_with_spectrum(n, 0.1, 5.0);
        const double det = a.determinant();
        const double root = std::pow(det, 1.0 / n);
        const double logdet = std::log(det);
        const double gamma = 0.5 * lambda_min(a);

        const DetRootRepresentation dr = detroot_min_representation(a);
        const LogDetRepresentation lr = logdet_min_representation(a, gamma);
        e_root = std::max(e_root, std::abs(dr.value - root) / std::max(1.0, root));
        e_log = std::max(e_log, std::abs(lr.value - logdet) / std::max(1.0, std::abs(logdet)));

        for (int c = 0; c < 10; ++c) {
            const Mat b = rng.symmetric_with_spectrum(n, 0.01, 5.0);
            beat_root = std::max(beat_root, (root - detroot_objective(a, b)) / std::max(1.0, root));
            // Feasible M: 0 < M <= I / gamma, scale fixed by det M = s^{-N}.
            const Mat m = rng.symmetric_with_spectrum(n, 1e-3, 1.0 / gamma);
            const double s = std::pow(m.determinant(), -1.0 / n);
            beat_log = std::max(beat_log, (logdet - logdet_objective(a, s, m)) / std::max(1.0, std::abs(logdet)));
        }
    }
    upper(out, "detroot_matches_det_root", e_root, tolerances::representation);
    upper(out, "logdet_matches_log_det", e_log, tolerances::representation);
    upper(out, "detroot_competitors_never_lower", beat_root, tolerances::representation);
    upper(out, "logdet_competitors_never_lower", beat_log, tolerances::representation);
}

void inequalities(Checks& out, std::uint64_t seed) {
    const InequalityReport rep = matrix_inequality_suite(10000, seed, tolerances::inequality);
    for (const InequalityCheck& c : rep.checks) {
        upper(out, c.name + ".violations", static_cast<double>(c.violations), 0.0);
    }
}

void convexity(Checks& out, std::uint64_t seed) {
    const FieldFamily fam = FieldFamily::heisenberg(1);
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const std::vector<Vec> pts = ball.samples_where(1000, seed, [](const Vec& x) { return psi_of(x) > 1e-6; });
    const NormConvexityReport nr = x_convexity_of_norm_check(pts, 0.0);
    upper(out, "norm_hessian_psd", -nr.min_lambda, tolerances::norm_oracle);
    upper(out, "norm_hessian_det_zero", nr.max_abs_det, tolerances::norm_oracle);
    upper(out, "norm_kernel_identity", nr.max_kernel_residual, tolerances::norm_oracle);
    upper(out, "norm_hessian_formula", nr.max_formula_residual, tolerances::norm_oracle);

    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    const ConvexityReport wr = check_x_convex_exact(w.jet, fam, pts);
    upper(out, "w_x_convex", -wr.gamma_lower, tolerances::identity);
}

void constructions(Checks& out, std::uint64_t seed) {
    const FieldFamily fam = FieldFamily::heisenberg(1);
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    const Hamiltonian ma = Hamiltonian::source_term(explicit_heisenberg_oracle(HeisenbergOracle::f_144).value);
    const std::vector<Vec> inner =
        ball.samples_where(1000, seed, [](const Vec& x) { return heisenberg_gauge(x) < 0.0625; });
    const std::vector<Vec> whole = ball.interior_samples(1000, seed + 1);

    double sup[3] = {0.0, 0.0, 0.0};
    const double eps[3] = {1e-1, 1e-2, 1e-3};
    double above = 0.0;
    for (int l = 0; l < 3; ++l) {
        const StrictSubsolution s = perturb_to_strict(w, fam, ma, ball, inner, eps[l]);
        for (const std::vector<Vec>* set : {&inner, &whole}) {
            for (const Vec& x : *set) {
                const double d = s.value(x) - w.value(x);
                sup[l] = std::max(sup[l], std::abs(d));
                above = std::max(above, d);
            }
        }
        if (l == 1) {
            lower(out, "strict.alpha_positive", s.params.alpha, std::numeric_limits<double>::min());
            upper(out, "strict.uniform_modulus", s.params.nu_min - s.min_lambda, tolerances::strict_modulus);
            upper(out, "strict.certified", s.certified ? 0.0 : 1.0, 0.0);
        }
    }
    const double slope = std::max(std::abs(std::log10(sup[0] / sup[1]) - 1.0), std::abs(std::log10(sup[1] / sup[2]) - 1.0));
    upper(out, "strict.linear_in_epsilon", slope, tolerances::strict_linear_slope);
    upper(out, "strict.below_u", above, 0.0);

    // Lower barrier on the Euclidean unit ball of H^1 with H = 1, g = 0.
    const DomainSpec eball = DomainSpec::euclidean_ball(1.0, Vec::Zero(3));
    const SmoothFunction zero{[](const Vec&) { return 0.0; }, [](const Vec& x) { return EuclideanJet2::zero(x.size()); }};
    BarrierOptions bo;
    bo.seed = seed;
    const LowerBarrier lb = lower_barrier(eball, zero, fam, Hamiltonian::constant(1.0), bo);
    upper(out, "barrier.accepted", lb.accepted ? 0.0 : 1.0, 0.0);
    upper(out, "barrier.x_convex", -lb.min_lambda, tolerances::barrier_convexity);
    upper(out, "barrier.subsolution", lb.max_residual, tolerances::barrier_residual);
    upper(out, "barrier.boundary_values", lb.max_boundary_gap, tolerances::barrier_boundary);

    const LowerBarrier gauss =
        lower_barrier(eball, zero, fam, Hamiltonian::gauss([](const Vec&, double) { return 1.0; }, 2), bo);
    upper(out, "barrier.gauss_rejected", gauss.accepted ? 1.0 : 0.0, 0.0);

    const UpperBarrier ub = upper_barrier(eball, zero, fam, UpperBarrierKind::automatic, bo);
    upper(out, "upper_barrier.certified", ub.certified ? 0.0 : 1.0, 0.0);
}

SolveResult oracle_solve(double h, int threads) {
    DirichletProblem p = koranyi_maheis_problem(h);
    p.solver.threads = threads;
    return solve_dirichlet(p);
}

void solver_oracle(Checks& out, const SuiteOptions& o) {
    const SolveResult r = oracle_solve(o.solver_h, o.threads);
    upper(out, "converged", r.report.converged ? 0.0 : 1.0, 0.0);
    upper(out, "oracle_error", r.report.oracle_error.value_or(INFINITY), tolerances::solver_error(o.solver_h));
    upper(out, "monotonicity_violations", static_cast<double>(r.report.monotonicity_violations), 0.0);
}

void comparison(Checks& out, std::uint64_t seed, const SuiteOptions& o) {
    const SolveResult r = oracle_solve(o.solver_h, o.threads);
    const double err = r.report.oracle_error.value_or(INFINITY);
    const double tol_cmp = 2.0 * err;
    const auto grid = r.u.grid_ptr();

    const FieldFamily fam = FieldFamily::heisenberg(1);
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    const Hamiltonian ma = Hamiltonian::source_term(explicit_heisenberg_oracle(HeisenbergOracle::f_144).value);
    const std::vector<Vec> inner =
        ball.samples_where(500, seed, [](const Vec& x) { return heisenberg_gauge(x) < 0.0625; });
    const std::vector<Vec> probe = ball.interior_samples(500, seed + 1);

    Rng rng(seed);
    for (int i = 0; i < 20; ++i) {
        ScalarField sub;
        std::string label;
        switch (i % 3) {
            case 0: {
                const double c = rng.uniform(0.0, 0.5);
                sub = [wv = w.value, c](const Vec& x) { return wv(x) - c; };
                label = "w_shift";
                break;
            }
            case 1: {
                const double e = rng.uniform(1e-3, 1e-1);
                sub = perturb_to_strict(w, fam, ma, ball, inner, e).value;
                label = "strict_perturbation";
                break;
            }
            default: {
                const double mu = 4.0 * std::pow(2.0, std::floor(rng.uniform(0.0, 4.0)));
                sub = exponential_subsolution(ball, fam, ma, 1.0, probe, mu).v.value;
                label = "exponential";
                break;
            }
        }
        GridFunction sub_grid = grid_function_from(grid, sub, sub);
        GridFunction super_grid;
        if (i % 2 == 0) {
            super_grid = r.u;
            label += "_vs_solver";
        } else {
            const double c = rng.uniform(1.0, 2.0);
            const ScalarField cf = [c](const Vec&) { return c; };
            super_grid = grid_function_from(grid, cf, cf);
            label += "_vs_constant";
        }
        const ComparisonResult cr = comparison_check(sub_grid, super_grid, tol_cmp);
        upper(out, "pair_" + std::to_string(i) + "." + label, cr.sup_interior_gap - cr.max_boundary_gap, tol_cmp);
    }
}

}  // namespace

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
    const std::uint64_t seed = options.seed.value_or(default_suite_seed(name));
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult res;
    res.suite = name;
    if (name == "identities") {
        identities(res.checks, seed);
    } else if (name == "representations") {
        representations(res.checks, seed);
    } else if (name == "inequalities") {
        inequalities(res.checks, seed);
    } else if (name == "convexity") {
        convexity(res.checks, seed);
    } else if (name == "constructions") {
        constructions(res.checks, seed);
    } else if (name == "solver_oracle") {
        solver_oracle(res.checks, options);
    } else if (name == "comparison") {
        comparison(res.checks, seed, options);
    }
    res.checks_run = res.checks.size();
    for (const SuiteCheck& c : res.checks) res.worst_margin = std::max(res.worst_margin, c.margin());
    res.pass = res.checks_run > 0 && res.worst_margin <= 1.0;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const SuiteOptions& options) {
    for (const std::string& n : names) default_suite_seed(n);  // validate before launching
    std::vector<std::future<SuiteResult>> jobs;
    for (const std::string& n : names) {
        jobs.push_back(std::async(std::launch::async, [n, options] { return run_suite(n, options); }));
    }
    std::vector<SuiteResult> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace carnot_ma
