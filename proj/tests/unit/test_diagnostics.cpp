#include "carnot_ma/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace carnot_ma;

namespace {

void expect_poles(const std::vector<Vec>& pts, double t) {
    ASSERT_EQ(pts.size(), 2u);
    bool north = false, south = false;
    for (const Vec& z : pts) {
        EXPECT_NEAR(z.head(2).norm(), 0.0, 1e-8);
        north = north || std::abs(z(2) - t) < 1e-8;
        south = south || std::abs(z(2) + t) < 1e-8;
    }
    EXPECT_TRUE(north);
    EXPECT_TRUE(south);
}

}  // namespace

TEST(Diagnostics, DefectVanishesOnlyAtThePoles) {
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const FieldFamily fam = FieldFamily::heisenberg(1);
    Vec z(3);
    z << 0.0, 0.0, 1.0;
    EXPECT_NEAR(characteristic_defect(ball, fam, z), 0.0, 1e-15);
    z << 1.0, 0.0, 0.0;
    EXPECT_NEAR(characteristic_defect(ball, fam, z), 1.0, 1e-12);
}

TEST(Diagnostics, KoranyiBallPoles) {
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    expect_poles(characteristic_points(ball, FieldFamily::heisenberg(1), ball.boundary_samples(400, 1)), 1.0);
}

TEST(Diagnostics, EuclideanBallPolesUnderHeisenbergFields) {
    const DomainSpec ball = DomainSpec::euclidean_ball(1.0, Vec::Zero(3));
    expect_poles(characteristic_points(ball, FieldFamily::heisenberg(1), ball.boundary_samples(400, 2)), 1.0);
}

TEST(Diagnostics, ScaledKoranyiBall) {
    const DomainSpec ball = DomainSpec::koranyi_ball(1.5, 1);
    expect_poles(characteristic_points(ball, FieldFamily::heisenberg(1), ball.boundary_samples(400, 3)), 2.25);
}

TEST(Diagnostics, NoCharacteristicPointsForEuclideanFields) {
    const DomainSpec ball = DomainSpec::euclidean_ball(1.0, Vec::Zero(3));
    EXPECT_TRUE(characteristic_points(ball, FieldFamily::euclidean(3), ball.boundary_samples(400, 4)).empty());
}

TEST(Diagnostics, RefinedPointsSatisfyTheDefectTolerance) {
    const DomainSpec ball = DomainSpec::koranyi_ball(1.0, 1);
    const FieldFamily fam = FieldFamily::heisenberg(1);
    for (const Vec& z : characteristic_points(ball, fam, ball.boundary_samples(200, 5))) {
        EXPECT_LE(characteristic_defect(ball, fam, z), 1e-8);
        EXPECT_NEAR(ball.phi(z), 0.0, 1e-10);
    }
}

TEST(Diagnostics, ComparisonCheck) {
    GridOptions o;
    o.h = 0.2;
    const auto g = Grid::build(DomainSpec::euclidean_ball(1.0, Vec::Zero(2)), FieldFamily::euclidean(2), o);
    GridFunction u(g), v(g);
    u.set_boundary([](const Vec&) { return 0.0; });
    v.set_boundary([](const Vec&) { return 0.1; });
    u.set_interior([](const Vec&) { return 0.5; });
    v.set_interior([](const Vec&) { return 0.3; });
    ComparisonResult c = comparison_check(u, v, 0.05);
    EXPECT_NEAR(c.sup_interior_gap, 0.2, 1e-15);
    EXPECT_EQ(c.max_boundary_gap, 0.0);
    EXPECT_FALSE(c.holds);
    c = comparison_check(u, v, 0.25);
    EXPECT_TRUE(c.holds);
}
