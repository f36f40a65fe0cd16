#include "carnot_ma/calculus.hpp"
#include "carnot_ma/constructions.hpp"
#include "carnot_ma/operators.hpp"
#include "carnot_ma/oracle_harness.hpp"
#include "carnot_ma/random.hpp"
#include "carnot_ma/scheme.hpp"

#include <benchmark/benchmark.h>

using namespace carnot_ma;

static void BM_HorizontalJetExact(benchmark::State& state) {
    const FieldFamily fam = FieldFamily::heisenberg(1);
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    Vec x(3);
    x << 0.3, -0.2, 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(horizontal_jet_exact(fam, x, w.jet(x)));
}
BENCHMARK(BM_HorizontalJetExact);

static void BM_DetRootRepresentation(benchmark::State& state) {
    Rng rng(3);
    const Mat a = rng.symmetric_with_spectrum(static_cast<int>(state.range(0)), 0.1, 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(detroot_min_representation(a));
}
BENCHMARK(BM_DetRootRepresentation)->Arg(2)->Arg(3);

static void BM_NodeSolve(benchmark::State& state) {
    const DirichletProblem p = koranyi_maheis_problem(0.1);
    const auto grid = Grid::build(p.domain, p.family, p.grid);
    const Scheme scheme(grid, p.hamiltonian);
    GridFunction u(grid);
    u.set_boundary(p.boundary.g);
    u.set_interior(*p.oracle);
    NodeStencil st;
    std::size_t k = 0;
    for (auto _ : state) {
        scheme.prepare(u, k, nullptr, st);
        benchmark::DoNotOptimize(scheme.solve(st, u.interior_value(k) - 0.01));
        k = (k + 97) % grid->interior().size();
    }
}
BENCHMARK(BM_NodeSolve);

static void BM_SolveKoranyi(benchmark::State& state) {
    const DirichletProblem p = koranyi_maheis_problem(0.2);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(p).report.iterations);
}
BENCHMARK(BM_SolveKoranyi)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
