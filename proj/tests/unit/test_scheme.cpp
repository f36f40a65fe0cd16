#include "carnot_ma/constructions.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/random.hpp"
#include "carnot_ma/scheme.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace carnot_ma;

namespace {

std::shared_ptr<const Grid> koranyi_grid(double h) {
    GridOptions o;
    o.h = h;
    return Grid::build(DomainSpec::koranyi_ball(1.0, 1), FieldFamily::heisenberg(1), o);
}

Hamiltonian gauss_one() {
    return Hamiltonian::gauss([](const Vec&, double) { return 1.0; }, 2);
}

GridFunction random_convexish(const std::shared_ptr<const Grid>& g, std::uint64_t seed) {
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    GridFunction u(g);
    u.set_boundary(w.value);
    u.set_interior(w.value);
    Rng rng(seed);
    for (std::size_t k = 0; k < g->interior().size(); ++k) {
        u.values()[static_cast<std::size_t>(g->interior()[k])] += rng.uniform(-0.05, 0.05);
    }
    return u;
}

}  // namespace

TEST(Scheme, AutomaticGradientMode) {
    const auto g = koranyi_grid(0.2);
    EXPECT_EQ(Scheme(g, gauss_one()).gradient_mode(), GradientMode::upwind);
    const Hamiltonian skew = Hamiltonian::custom([](const Vec&, double, const Vec& q) { return 1.0 + 0.1 * q(0); },
                                                 true, false, true, false);
    EXPECT_EQ(Scheme(g, skew).gradient_mode(), GradientMode::centered);
    EXPECT_THROW(Scheme(g, skew, GradientMode::upwind), InputError);
    EXPECT_FALSE(Scheme(g, gauss_one()).has_q_correction());  // Q vanishes on H^1
}

// F must be nondecreasing in the node value and nonincreasing in every other value.
TEST(Scheme, MonotoneOnOneHundredNodes) {
    const auto g = koranyi_grid(0.2);
    const Scheme scheme(g, gauss_one(), GradientMode::upwind);
    const GridFunction u = random_convexish(g, 5);
    Rng rng(6);
    const std::size_t nodes = g->interior().size();
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = std::min(nodes - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(nodes)));
        const double delta = rng.uniform(1e-4, 1e-2);
        const double f0 = scheme.residual(u, k);

        GridFunction up = u;
        up.values()[static_cast<std::size_t>(g->interior()[k])] += delta;
        EXPECT_GE(scheme.residual(up, k), f0 - 1e-12) << "node " << k;

        GridFunction nb = u;
        for (double& v : nb.values()) v += delta;
        for (double& v : nb.boundary_values()) v += delta;
        nb.values()[static_cast<std::size_t>(g->interior()[k])] -= delta;
        EXPECT_LE(scheme.residual(nb, k), f0 + 1e-12) << "node " << k;
        ++checked;
    }
    EXPECT_EQ(checked, 100u);
}

TEST(Scheme, StencilResidualIsNondecreasingInU0) {
    const auto g = koranyi_grid(0.2);
    const Scheme scheme(g, gauss_one(), GradientMode::upwind);
    const GridFunction u = random_convexish(g, 7);
    NodeStencil st;
    for (std::size_t k = 0; k < g->interior().size(); k += 11) {
        scheme.prepare(u, k, nullptr, st);
        const double u0 = u.interior_value(k);
        double prev = scheme.residual(st, u0 - 0.5);
        for (int i = 1; i <= 20; ++i) {
            const double f = scheme.residual(st, u0 - 0.5 + 0.05 * i);
            EXPECT_GE(f, prev - 1e-12);
            prev = f;
        }
    }
}

// Dropping frames can only lower the residual: the infimum runs over fewer frames.
TEST(Scheme, FrameRefinementInvariant) {
    const auto g = koranyi_grid(0.2);
    const Scheme scheme(g, Hamiltonian::source_term(explicit_heisenberg_oracle(HeisenbergOracle::f_144).value));
    const GridFunction u = random_convexish(g, 8);
    const auto& frames = g->directions().frames;
    NodeStencil st;
    for (std::size_t k = 0; k < g->interior().size(); k += 5) {
        scheme.prepare(u, k, nullptr, st);
        const double u0 = u.interior_value(k);
        const double full = scheme.residual(st, u0);
        std::vector<std::vector<int>> sub;
        for (std::size_t f = 0; f < frames.size(); ++f) {
            sub.push_back(frames[f]);
            EXPECT_LE(scheme.residual_with_frames(st, u0, sub), full + 1e-14);
        }
        EXPECT_EQ(scheme.residual_with_frames(st, u0, frames), full);
    }
}

// With lattice-aligned arms every second difference of |x|^2 is exact, so
// |x|^2 solves the discrete equation det D^2 u = 4 to rounding.
TEST(Scheme, QuadraticIsDiscreteSolutionOnAxisStencil) {
    GridOptions o;
    o.h = 0.1;
    o.frames_K = 1;
    o.reach = 0.2;
    const auto g = Grid::build(DomainSpec::euclidean_ball(1.0, Vec::Zero(2)), FieldFamily::euclidean(2), o);
    const Scheme scheme(g, Hamiltonian::constant(4.0));
    const ScalarField q = [](const Vec& x) { return x.squaredNorm(); };
    GridFunction u(g);
    u.set_boundary(q);
    u.set_interior(q);
    for (std::size_t k = 0; k < g->interior().size(); ++k) EXPECT_NEAR(scheme.residual(u, k), 0.0, 1e-9);
}

TEST(Scheme, ConsistentOnWideStencil) {
    GridOptions o;
    o.h = 0.05;
    const auto g = Grid::build(DomainSpec::euclidean_ball(1.0, Vec::Zero(2)), FieldFamily::euclidean(2), o);
    const Scheme scheme(g, Hamiltonian::constant(4.0));
    const ScalarField q = [](const Vec& x) { return x.squaredNorm(); };
    GridFunction u(g);
    u.set_boundary(q);
    u.set_interior(q);
    double worst = 0.0;
    for (std::size_t k = 0; k < g->interior().size(); ++k) worst = std::max(worst, std::abs(scheme.residual(u, k)));
    // Interpolation error h^2 / s^2 = h / reach_factor^2.
    EXPECT_LT(worst, 2.0 * o.h / (0.8 * 0.8));
}

TEST(Scheme, NodeSolveEndsOnSubsolutionSide) {
    const auto g = koranyi_grid(0.2);
    const Scheme scheme(g, gauss_one(), GradientMode::upwind);
    const GridFunction u = random_convexish(g, 9);
    NodeStencil st;
    for (std::size_t k = 0; k < g->interior().size(); k += 3) {
        scheme.prepare(u, k, nullptr, st);
        for (double start : {u.interior_value(k) - 1.0, u.interior_value(k) + 1.0}) {
            const Scheme::NodeSolve s = scheme.solve(st, start);
            EXPECT_LE(scheme.residual(st, s.value), 0.0);
            EXPECT_EQ(s.decreased, s.residual_before > 0.0);
            if (!s.decreased) EXPECT_GE(s.value, start);
            const double bump = 1e-9 * (1.0 + std::abs(s.value));
            if (std::isfinite(s.value)) EXPECT_GT(scheme.residual(st, s.value + bump), 0.0) << "node " << k;
        }
    }
}

TEST(Scheme, LatticeGradientsOfAffineFunction) {
    const auto g = koranyi_grid(0.2);
    const Scheme scheme(g, gauss_one());
    GridFunction u(g);
    const ScalarField f = [](const Vec& x) { return 0.5 * x(0) - 2.0 * x(1) + x(2); };
    u.set_boundary(f);
    u.set_interior(f);
    Vec expect(3);
    expect << 0.5, -2.0, 1.0;
    for (const Vec& grad : scheme.lattice_gradients(u)) EXPECT_NEAR((grad - expect).norm(), 0.0, 1e-12);
}
