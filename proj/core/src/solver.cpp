#include "carnot_ma/solver.hpp"

#include "carnot_ma/constructions.hpp"
#include "carnot_ma/diagnostics.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/expression.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace carnot_ma {

std::string to_string(SweepMode mode) { return mode == SweepMode::jacobi ? "jacobi" : "gauss_seidel"; }

std::string to_string(StartKind kind) {
    switch (kind) {
        case StartKind::automatic: return "automatic";
        case StartKind::constant: return "constant";
        case StartKind::lower_barrier: return "lower_barrier";
        case StartKind::exponential: return "exponential";
        case StartKind::user: return "user";
    }
    return "unknown";
}

BoundaryData BoundaryData::from_function(ScalarField g) {
    BoundaryData b;
    b.g = std::move(g);
    return b;
}

BoundaryData BoundaryData::from_smooth(SmoothFunction g) {
    BoundaryData b;
    b.g = g.value;
    b.smooth = std::move(g);
    return b;
}

namespace {

void monomials(int n, int degree, std::vector<int>& current, int var, std::vector<std::vector<int>>& out) {
    if (var == n) {
        out.push_back(current);
        return;
    }
    int used = 0;
    for (int e : current) used += e;
    for (int e = 0; e + used <= degree; ++e) {
        current[static_cast<std::size_t>(var)] = e;
        monomials(n, degree, current, var + 1, out);
    }
    current[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

BoundaryData BoundaryData::from_samples(const std::vector<Vec>& points, const std::vector<double>& values,
                                        double tol_g, int max_degree) {
    if (points.empty() || points.size() != values.size()) {
        throw InputError("boundary samples: need matching nonempty point and value lists");
    }
    const int n = static_cast<int>(points.front().size());
    Vec rhs(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = values[i];
    double best_err = std::numeric_limits<double>::infinity();
    std::string best_text;
    int best_degree = -1;
    for (int degree = 0; degree <= max_degree; ++degree) {
        std::vector<std::vector<int>> mons;
        std::vector<int> cur(static_cast<std::size_t>(n), 0);
        monomials(n, degree, cur, 0, mons);
        if (mons.size() > points.size()) break;
        Mat a(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(mons.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = 0; j < mons.size(); ++j) {
                double v = 1.0;
                for (int k = 0; k < n; ++k) v *= std::pow(points[i](k), mons[j][static_cast<std::size_t>(k)]);
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            }
        }
        const Vec c = a.colPivHouseholderQr().solve(rhs);
        const double err = (a * c - rhs).cwiseAbs().maxCoeff();
        if (err < best_err) {
            std::string text = "0";
            char buf[64];
            for (std::size_t j = 0; j < mons.size(); ++j) {
                if (c(static_cast<Eigen::Index>(j)) == 0.0) continue;
                std::snprintf(buf, sizeof buf, "%.17g", c(static_cast<Eigen::Index>(j)));
                text += std::string("+(") + buf + ")";
                for (int k = 0; k < n; ++k) {
                    const int e = mons[j][static_cast<std::size_t>(k)];
                    if (e > 0) text += "*x" + std::to_string(k + 1) + "^" + std::to_string(e);
                }
            }
            best_err = err;
            best_text = text;
            best_degree = degree;
        }
        if (err < tol_g) break;
    }
    const ExpressionField field = ExpressionField::parse(best_text, n);
    BoundaryData b = from_smooth(field.as_function());
    b.fit_error = best_err;
    b.fit_degree = best_degree;
    return b;
}

GridFunction grid_function_from(std::shared_ptr<const Grid> grid, const ScalarField& interior,
                                const ScalarField& boundary) {
    GridFunction u(std::move(grid));
    u.set_boundary(boundary);
    u.set_interior(interior);
    return u;
}

double max_scheme_residual(const Scheme& scheme, const GridFunction& u) {
    const Grid& g = scheme.grid();
    std::vector<Vec> grads;
    if (scheme.has_q_correction()) grads = scheme.lattice_gradients(u);
    NodeStencil st;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.interior().size(); ++k) {
        scheme.prepare(u, k, scheme.has_q_correction() ? &grads[k] : nullptr, st);
        worst = std::max(worst, scheme.residual(st, u.interior_value(k)));
    }
    return worst;
}

namespace {

double max_abs_residual(const Scheme& scheme, const GridFunction& u) {
    const Grid& g = scheme.grid();
    std::vector<Vec> grads;
    if (scheme.has_q_correction()) grads = scheme.lattice_gradients(u);
    NodeStencil st;
    double worst = 0.0;
    for (std::size_t k = 0; k < g.interior().size(); ++k) {
        scheme.prepare(u, k, scheme.has_q_correction() ? &grads[k] : nullptr, st);
        worst = std::max(worst, std::abs(scheme.residual(st, u.interior_value(k))));
    }
    return worst;
}

struct Start {
    GridFunction u;
    StartKind kind = StartKind::automatic;
    bool certified = false;
    double parameter = 0.0;
};

bool certified(const Scheme& scheme, const GridFunction& u) {
    return max_scheme_residual(scheme, u) <= 0.0;
}

std::optional<Start> try_constant(const Scheme& scheme, const GridFunction& base, double g_min) {
    Start s{base, StartKind::constant, false, g_min};
    s.u.set_interior([g_min](const Vec&) { return g_min; });
    if (!certified(scheme, s.u)) return std::nullopt;
    s.certified = true;
    return s;
}

std::optional<Start> try_barrier(const Scheme& scheme, const GridFunction& base, const DirichletProblem& p) {
    if (!p.boundary.smooth) return std::nullopt;
    const LowerBarrier lb = lower_barrier(p.domain, *p.boundary.smooth, p.family, p.hamiltonian);
    if (!lb.accepted) return std::nullopt;
    const SmoothFunction phi = p.domain.phi_function();
    const ScalarField g = p.boundary.g;
    const double mu = lb.params.mu;
    double lambda = lb.params.lambda;
    for (int d = 0; d <= 20; ++d, lambda *= 2.0) {
        Start s{base, StartKind::lower_barrier, false, lambda};
        s.u.set_interior([&](const Vec& x) { return lambda * (std::exp(-mu * phi.value(x)) - 1.0) + g(x); });
        if (certified(scheme, s.u)) {
            s.certified = true;
            return s;
        }
    }
    return std::nullopt;
}

std::optional<Start> try_exponential(const Scheme& scheme, const GridFunction& base, const DirichletProblem& p,
                                     double g_min) {
    const Grid& grid = scheme.grid();
    std::vector<Vec> pts = grid.boundary_points();
    for (std::int32_t id : grid.interior()) pts.push_back(grid.coordinates(id));
    std::vector<Vec> probe;
    for (std::size_t i = 0; i < pts.size(); i += std::max<std::size_t>(1, pts.size() / 500)) probe.push_back(pts[i]);
    const ExponentialSubsolution ex = exponential_subsolution(p.domain, p.family, p.hamiltonian, g_min, probe);
    const int m = p.family.m();
    double rho2 = 0.0;
    for (const Vec& x : pts) rho2 = std::max(rho2, x.head(m).squaredNorm());
    for (Vec& x : p.domain.boundary_samples(2000, 3)) rho2 = std::max(rho2, x.head(m).squaredNorm());
    double mu = ex.mu;
    for (int d = 0; d <= 20; ++d, mu *= 2.0) {
        const double shift = std::exp(0.5 * mu * rho2) - g_min;
        if (!std::isfinite(shift)) break;
        Start s{base, StartKind::exponential, false, mu};
        s.u.set_interior([&](const Vec& x) { return std::exp(0.5 * mu * x.head(m).squaredNorm()) - shift; });
        if (certified(scheme, s.u)) {
            s.certified = true;
            return s;
        }
    }
    return std::nullopt;
}

Start select_start(const Scheme& scheme, const GridFunction& base, const DirichletProblem& p) {
    double g_min = std::numeric_limits<double>::infinity();
    for (double v : base.boundary_values()) g_min = std::min(g_min, v);
    if (!std::isfinite(g_min)) {
        for (std::int32_t id = 0; id < static_cast<std::int32_t>(base.grid().lattice_size()); ++id) {
            if (!base.grid().inside(id)) g_min = std::min(g_min, base.at(id));
        }
    }
    const StartKind kind = p.solver.start;
    if (kind == StartKind::user) {
        if (!p.user_start) throw InputError("solve: start 'user' needs a start function");
        Start s{base, StartKind::user, false, 0.0};
        s.u.set_interior(*p.user_start);
        s.certified = certified(scheme, s.u);
        return s;
    }
    if (kind == StartKind::automatic || kind == StartKind::constant) {
        if (auto s = try_constant(scheme, base, g_min)) return *s;
    }
    if (kind == StartKind::automatic || kind == StartKind::lower_barrier) {
        if (auto s = try_barrier(scheme, base, p)) return *s;
    }
    if (kind == StartKind::automatic || kind == StartKind::exponential) {
        if (auto s = try_exponential(scheme, base, p, g_min)) return *s;
    }
    throw PerronEmptyError("solve: no discrete subsolution below the boundary data was found");
}

struct SweepStats {
    double max_update = 0.0;
    double min_update = 0.0;
    double max_residual = 0.0;
    std::size_t violations = 0;
};

void update_range(const Scheme& scheme, const GridFunction& read, std::vector<double>& write,
                  const std::vector<Vec>* grads, std::size_t begin, std::size_t end, SweepStats& stats) {
    const Grid& g = scheme.grid();
    NodeStencil st;
    for (std::size_t k = begin; k < end; ++k) {
        scheme.prepare(read, k, grads ? &(*grads)[k] : nullptr, st);
        const double cur = read.interior_value(k);
        const Scheme::NodeSolve r = scheme.solve(st, cur);
        const double upd = r.value - cur;
        if (upd < -1e-12 * (1.0 + std::abs(cur))) ++stats.violations;
        stats.max_update = std::max(stats.max_update, std::abs(upd));
        stats.min_update = std::min(stats.min_update, upd);
        stats.max_residual = std::max(stats.max_residual, std::abs(r.residual_before));
        write[static_cast<std::size_t>(g.interior()[k])] = r.value;
    }
}

}  // namespace

SolveResult solve_dirichlet(const DirichletProblem& problem) {
    return solve_dirichlet(problem, Grid::build(problem.domain, problem.family, problem.grid));
}

SolveResult solve_dirichlet(const DirichletProblem& problem, std::shared_ptr<const Grid> grid) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolverOptions& opt = problem.solver;
    if (!(opt.tol_update > 0.0) || !(opt.tol_res > 0.0)) throw InputError("solve: tolerances must be positive");
    if (!problem.hamiltonian.monotone_in_r()) throw InputError("solve: H must be nondecreasing in r");
    const Scheme scheme(grid, problem.hamiltonian, opt.gradient);

    GridFunction base(grid);
    base.set_boundary(problem.boundary.g);
    Start start = select_start(scheme, base, problem);

    SolveResult result{start.u, {}};
    SolveReport& rep = result.report;
    rep.start_used = start.kind;
    rep.start_certified = start.certified;
    rep.start_parameter = start.parameter;
    rep.nodes = grid->interior().size();
    rep.h = problem.grid.h;
    rep.reach = grid->reach();

    GridFunction& u = result.u;
    const std::size_t count = grid->interior().size();
    const int threads = std::max(1, opt.threads);
    for (int it = 0; it < opt.max_iters; ++it) {
        std::vector<Vec> grads;
        if (scheme.has_q_correction()) grads = scheme.lattice_gradients(u);
        const std::vector<Vec>* gp = scheme.has_q_correction() ? &grads : nullptr;
        SweepStats total;
        if (opt.mode == SweepMode::gauss_seidel) {
            update_range(scheme, u, u.values(), gp, 0, count, total);
        } else {
            const GridFunction snapshot = u;
            std::vector<SweepStats> stats(static_cast<std::size_t>(threads));
            std::vector<std::thread> pool;
            const std::size_t chunk = (count + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
            for (int t = 0; t < threads; ++t) {
                const std::size_t b = std::min(count, static_cast<std::size_t>(t) * chunk);
                const std::size_t e = std::min(count, b + chunk);
                if (t == threads - 1) {
                    update_range(scheme, snapshot, u.values(), gp, b, e, stats[static_cast<std::size_t>(t)]);
                } else {
                    pool.emplace_back([&, b, e, t] {
                        update_range(scheme, snapshot, u.values(), gp, b, e, stats[static_cast<std::size_t>(t)]);
                    });
                }
            }
            for (std::thread& th : pool) th.join();
            for (const SweepStats& s : stats) {
                total.max_update = std::max(total.max_update, s.max_update);
                total.min_update = std::min(total.min_update, s.min_update);
                total.max_residual = std::max(total.max_residual, s.max_residual);
                total.violations += s.violations;
            }
        }
        rep.iterations = it + 1;
        rep.monotonicity_violations += total.violations;
        rep.final_max_update = total.max_update;
        if (opt.record_sweeps) rep.sweeps.push_back({total.max_update, total.max_residual, total.min_update});
        // A scheme that has lost monotonicity (centered gradients) can run away.
        bool finite = std::isfinite(total.max_update);
        for (std::size_t k = 0; finite && k < count; ++k) finite = std::abs(u.interior_value(k)) < 1e100;
        if (!finite) break;
        if (total.max_update < opt.tol_update || total.max_residual < opt.tol_res) {
            rep.converged = true;
            break;
        }
    }
    rep.final_max_residual = max_abs_residual(scheme, u);
    if (problem.oracle) rep.oracle_error = u.max_error(*problem.oracle);
    const std::vector<Vec> samples = problem.domain.boundary_samples(400, 29);
    rep.characteristic_points = characteristic_points(problem.domain, problem.family, samples);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace carnot_ma
