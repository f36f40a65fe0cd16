#include "carnot_ma/domain.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace carnot_ma;

namespace {

void expect_orthonormal_frames(const DirectionSet& ds, int m) {
    ASSERT_EQ(ds.directions.rows(), m);
    for (Eigen::Index c = 0; c < ds.directions.cols(); ++c) EXPECT_NEAR(ds.directions.col(c).norm(), 1.0, 1e-14);
    for (const std::vector<int>& f : ds.frames) {
        ASSERT_EQ(static_cast<int>(f.size()), m);
        Mat b(m, m);
        for (int j = 0; j < m; ++j) b.col(j) = ds.directions.col(f[static_cast<std::size_t>(j)]);
        EXPECT_NEAR((b.transpose() * b - Mat::Identity(m, m)).norm(), 0.0, 1e-13);
    }
    ASSERT_FALSE(ds.frames.empty());
    for (int j = 0; j < m; ++j) {
        const Vec e = ds.directions.col(ds.frames[0][static_cast<std::size_t>(j)]);
        EXPECT_NEAR((e.cwiseAbs() - Vec::Unit(m, j)).norm(), 0.0, 1e-14);
    }
}

Vec arm_endpoint(const Grid& g, std::size_t k, int d, int side) {
    const ArmEnd& a = g.arm(k, d, side);
    if (a.boundary >= 0) return g.boundary_points()[static_cast<std::size_t>(a.boundary)];
    const double* f = g.arm_fractions(k, d, side);
    Vec p = g.coordinates(a.base);
    for (int i = 0; i < g.n(); ++i) p(i) += f[i] * g.spacing()(i);
    return p;
}

std::shared_ptr<const Grid> koranyi_grid(double h) {
    GridOptions o;
    o.h = h;
    return Grid::build(DomainSpec::koranyi_ball(1.0, 1), FieldFamily::heisenberg(1), o);
}

}  // namespace

TEST(Grid, PlanarFramesAreOrthonormalPairs) {
    const DirectionSet ds = make_direction_set(2, 8);
    EXPECT_EQ(ds.directions.cols(), 16);
    EXPECT_EQ(ds.frames.size(), 8u);
    expect_orthonormal_frames(ds, 2);
}

TEST(Grid, IcosahedralTriadsPartitionFifteenAxes) {
    const DirectionSet ds = make_direction_set(3);
    EXPECT_EQ(ds.directions.cols(), 15);
    ASSERT_EQ(ds.frames.size(), 5u);
    expect_orthonormal_frames(ds, 3);
    std::vector<int> used(15, 0);
    for (const auto& f : ds.frames) {
        for (int c : f) ++used[static_cast<std::size_t>(c)];
    }
    for (int u : used) EXPECT_EQ(u, 1);
    // The 15 two-fold axes are pairwise distinct lines.
    for (int a = 0; a < 15; ++a) {
        for (int b = a + 1; b < 15; ++b) {
            EXPECT_LT(std::abs(ds.directions.col(a).dot(ds.directions.col(b))), 1.0 - 1e-6);
        }
    }
}

TEST(Grid, RandomFramesAreSeeded) {
    const DirectionSet a = make_direction_set(5, 8, 6, 42);
    const DirectionSet b = make_direction_set(5, 8, 6, 42);
    const DirectionSet c = make_direction_set(5, 8, 6, 43);
    expect_orthonormal_frames(a, 5);
    EXPECT_EQ(a.frames.size(), 6u);
    EXPECT_EQ(a.directions, b.directions);
    EXPECT_NE(a.directions, c.directions);
}

TEST(Grid, OneDimensionalDirections) {
    const DirectionSet ds = make_direction_set(1);
    EXPECT_EQ(ds.directions.cols(), 1);
    EXPECT_DOUBLE_EQ(ds.directions(0, 0), 1.0);
}

TEST(Grid, LatticeAndInteriorNodes) {
    const auto g = koranyi_grid(0.2);
    EXPECT_EQ(g->n(), 3);
    EXPECT_EQ(g->m(), 2);
    EXPECT_NEAR(g->reach(), 0.8 * std::sqrt(0.2), 1e-15);
    EXPECT_FALSE(g->interior().empty());
    for (std::size_t k = 0; k < g->interior().size(); ++k) {
        const std::int32_t id = g->interior()[k];
        EXPECT_TRUE(g->inside(id));
        EXPECT_EQ(g->interior_index(id), static_cast<std::int32_t>(k));
        EXPECT_GT(g->domain().phi(g->coordinates(id)), 0.0);
        EXPECT_EQ(g->id_of(g->multi_index(id)), id);
        EXPECT_EQ(g->nearest(g->coordinates(id)), id);
    }
    EXPECT_EQ(g->corner_offsets().size(), 8u);
}

TEST(Grid, ArmsFollowTheFieldsAndStayInTheDomain) {
    const auto g = koranyi_grid(0.2);
    const DomainSpec& dom = g->domain();
    std::size_t boundary_arms = 0;
    for (std::size_t k = 0; k < g->interior().size(); ++k) {
        const Vec x = g->coordinates(g->interior()[k]);
        const Mat sigma = g->family().sigma(x);
        for (int d = 0; d < g->dir_count(); ++d) {
            for (int side = 0; side < 2; ++side) {
                const ArmEnd& a = g->arm(k, d, side);
                const Vec v = (side == 0 ? 1.0 : -1.0) * g->directions().directions.col(d);
                const Vec p = arm_endpoint(*g, k, d, side);
                EXPECT_GT(a.s, 0.0);
                EXPECT_NEAR((p - (x + a.s * (sigma * v))).norm(), 0.0, 1e-9);
                if (a.boundary >= 0) {
                    ++boundary_arms;
                    EXPECT_NEAR(dom.phi(p), 0.0, 1e-9);
                } else {
                    EXPECT_DOUBLE_EQ(a.s, g->reach());
                    // Corners with positive weight must be interior lattice nodes.
                    const double* f = g->arm_fractions(k, d, side);
                    for (std::size_t c = 0; c < g->corner_offsets().size(); ++c) {
                        bool needed = true;
                        for (int i = 0; i < g->n(); ++i) needed = needed && ((c >> i) & 1u ? f[i] > 0.0 : f[i] < 1.0);
                        if (needed) EXPECT_TRUE(g->inside(a.base + g->corner_offsets()[c]));
                    }
                }
            }
        }
    }
    EXPECT_GT(boundary_arms, 0u);
    EXPECT_EQ(g->boundary_points().size(), boundary_arms);
    EXPECT_GT(g->boundary_touching_nodes(), 0u);
    EXPECT_LE(g->fully_boundary_nodes(), g->boundary_touching_nodes());
}

TEST(Grid, AnisotropicSpacing) {
    GridOptions o;
    o.h = 0.25;
    o.anisotropic_t = true;
    const auto g = Grid::build(DomainSpec::koranyi_ball(1.0, 1), FieldFamily::heisenberg(1), o);
    EXPECT_LE(g->spacing()(0), 0.25 + 1e-12);
    EXPECT_LE(g->spacing()(2), 0.0625 + 1e-12);
}

TEST(Grid, EmptyGridIsRejected) {
    GridOptions o;
    o.h = 10.0;
    EXPECT_THROW(Grid::build(DomainSpec::euclidean_ball(0.01, Vec::Constant(2, 0.013)), FieldFamily::euclidean(2), o),
                 InputError);
}

TEST(Grid, AffineFunctionsInterpolateExactly) {
    const auto g = koranyi_grid(0.2);
    const ScalarField f = [](const Vec& x) { return 1.0 + 2.0 * x(0) - 0.5 * x(1) + 3.0 * x(2); };
    GridFunction u(g);
    u.set_boundary(f);
    u.set_interior(f);
    EXPECT_NEAR(u.max_error(f), 0.0, 1e-15);
    for (std::size_t k = 0; k < g->interior().size(); k += 7) {
        for (int d = 0; d < g->dir_count(); ++d) {
            for (int side = 0; side < 2; ++side) {
                EXPECT_NEAR(u.arm_value(k, d, side), f(arm_endpoint(*g, k, d, side)), 1e-12);
            }
        }
    }
    for (const Vec& x : g->domain().interior_samples(100, 3, 0.3)) EXPECT_NEAR(u.interpolate(x), f(x), 1e-12);
}

TEST(Grid, CsvRoundTripIsBitIdentical) {
    const auto g = koranyi_grid(0.2);
    GridFunction u(g);
    const ScalarField f = [](const Vec& x) { return std::sin(3.1 * x(0)) * std::exp(x(1)) + x(2) / 3.0; };
    u.set_boundary(f);
    u.set_interior(f);
    std::ostringstream out;
    write_grid_csv(out, u);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "x1,x2,x3,value");

    GridFunction blank(g);
    blank.set_boundary(f);
    std::istringstream in(text);
    const GridFunction back = read_grid_csv(in, blank);
    for (std::size_t k = 0; k < g->interior().size(); ++k) EXPECT_EQ(back.interior_value(k), u.interior_value(k));
    std::ostringstream again;
    write_grid_csv(again, back);
    EXPECT_EQ(again.str(), text);
}

TEST(Grid, CsvRejectsMalformedRows) {
    const auto g = koranyi_grid(0.2);
    GridFunction u(g);
    std::istringstream bad("x1,x2,x3,value\n0,0,abc,1\n");
    EXPECT_THROW(read_grid_csv(bad, u), InputError);
    std::istringstream off("x1,x2,x3,value\n0.0123,0,0,1\n");
    EXPECT_THROW(read_grid_csv(off, u), InputError);
}
