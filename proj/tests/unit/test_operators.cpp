#include "carnot_ma/error.hpp"
#include "carnot_ma/operators.hpp"
#include "carnot_ma/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace carnot_ma;

namespace {

HorizontalJet jet_of(const Mat& a, const Vec& q) { return {0.0, q, a}; }

std::vector<Vec> some_points(int n, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> out;
    for (int i = 0; i < count; ++i) out.push_back(rng.in_ball(n, 1.0));
    return out;
}

}  // namespace

TEST(Operators, FormsAgreeInSignOnPositiveDefiniteJets) {
    Rng rng(10);
    const Hamiltonian h = Hamiltonian::separable([](const Vec&, double r) { return 1.0 + std::exp(r); }, 0.5);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 2 + trial % 2;
        const Mat a = rng.symmetric_with_spectrum(m, 0.05, 3.0);
        const Vec q = rng.normal_vector(m);
        const Vec x = rng.normal_vector(3);
        const double r = rng.uniform(-1.0, 1.0);
        const HorizontalJet j = jet_of(a, q);
        const double d = ma_residual(OperatorForm::det, x, r, j, h);
        const double root = ma_residual(OperatorForm::root, x, r, j, h);
        const double lg = ma_residual(OperatorForm::logdet, x, r, j, h);
        const double mx = ma_residual(OperatorForm::maxform, x, r, j, h);
        if (std::abs(d) < 1e-9) continue;
        EXPECT_EQ(d > 0, root > 0);
        EXPECT_EQ(d > 0, lg > 0);
        EXPECT_EQ(d > 0, mx > 0);
    }
}

TEST(Operators, MaxFormPositiveOffTheConvexCone) {
    Mat a(2, 2);
    a << 1.0, 0.0, 0.0, -0.5;
    const Hamiltonian h = Hamiltonian::constant(0.0);
    EXPECT_NEAR(ma_residual(OperatorForm::maxform, Vec::Zero(3), 0.0, jet_of(a, Vec::Zero(2)), h), 0.5, 1e-15);
    EXPECT_THROW(ma_residual(OperatorForm::logdet, Vec::Zero(3), 0.0, jet_of(a, Vec::Zero(2)), h), DomainError);
}

TEST(Operators, GaussCurvature) {
    Mat a = 2.0 * Mat::Identity(2, 2);
    Vec q(2);
    q << 1.0, 0.0;
    EXPECT_NEAR(gauss_curvature(jet_of(a, q)), 4.0 / 4.0, 1e-15);  // det 4, (1+1)^2
}

TEST(Operators, DetRootRepresentationOnSpdMatrices) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const Mat a = rng.symmetric_with_spectrum(n, 0.1, 4.0);
        const DetRootRepresentation r = detroot_min_representation(a);
        EXPECT_NEAR(r.value, std::pow(a.determinant(), 1.0 / n), 1e-12);
        EXPECT_NEAR(r.minimizer.determinant(), std::pow(n, -n), 1e-12);
        for (int c = 0; c < 20; ++c) {
            const Mat b = rng.symmetric_with_spectrum(n, 0.01, 3.0);
            EXPECT_GE(detroot_objective(a, b), r.value - 1e-12);
        }
    }
}

TEST(Operators, DetRootRepresentationSingularAndIndefinite) {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 1.0;
    EXPECT_NEAR(detroot_min_representation(a).value, 0.0, 1e-6);
    a(1, 1) = -1.0;
    EXPECT_THROW(detroot_min_representation(a), DomainError);
}

TEST(Operators, LogDetRepresentation) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 2;
        const Mat a = rng.symmetric_with_spectrum(n, 0.5, 4.0);
        const LogDetRepresentation r = logdet_min_representation(a, 0.5);
        EXPECT_NEAR(r.value, std::log(a.determinant()), 1e-12);
        EXPECT_NEAR(r.a, std::pow(a.determinant(), 1.0 / n), 1e-12);
        EXPECT_LT((r.m - a.inverse()).norm(), 1e-10);
    }
    EXPECT_THROW(logdet_min_representation(Mat::Identity(2, 2) * 0.1, 0.5), DomainError);
    EXPECT_THROW(logdet_min_representation(Mat::Identity(2, 2), 0.0), InputError);
}

TEST(Operators, InequalitySuiteHolds) {
    const InequalityReport r = matrix_inequality_suite(2000, 99);
    ASSERT_EQ(r.checks.size(), 4u);
    EXPECT_TRUE(r.all_hold());
    for (const InequalityCheck& c : r.checks) {
        EXPECT_EQ(c.trials, 2000u);
        EXPECT_EQ(c.violations, 0u) << c.name;
    }
    EXPECT_THROW(matrix_inequality_suite(0, 1), InputError);
}

TEST(Operators, InequalitySlacksOnHandExamples) {
    const Mat i2 = Mat::Identity(2, 2);
    EXPECT_NEAR(minkowski_slack(i2, i2), 0.0, 1e-15);  // equality for proportional matrices
    Vec q(2);
    q << 3.0, 4.0;
    EXPECT_NEAR(nonsingular_rank_one_defect(q), 0.0, 1e-12);
    EXPECT_GE(rank_one_lower_bound_slack(2.0 * i2, 2.0, 1.0, q), -1e-12);
}

TEST(Operators, GrowthCheckSeparatesGaussFromSourceTerms) {
    const auto xs = some_points(3, 16, 13);
    const auto radii = default_growth_radii();
    const GrowthCheckResult src = growth_check(
        Hamiltonian::source_term([](const Vec& x) { return 1.0 + x.squaredNorm(); }), 2, 0.0, xs, radii);
    EXPECT_TRUE(src.passes);
    EXPECT_NEAR(src.L, 0.0, 1e-12);
    const GrowthCheckResult lin = growth_check(Hamiltonian::transport_power([](const Vec&) { return 1.0; }, 2.0), 2,
                                               0.0, xs, radii);  // H^{1/2} = |q|
    EXPECT_TRUE(lin.passes);
    EXPECT_NEAR(lin.L, 1.0, 1e-9);
    const GrowthCheckResult gauss =
        growth_check(Hamiltonian::gauss([](const Vec&, double) { return 0.5; }, 2), 2, 0.0, xs, radii);
    EXPECT_FALSE(gauss.passes);
}

TEST(Operators, LipschitzCheck) {
    const auto xs = some_points(3, 8, 14);
    const LipschitzCheckResult lin =
        lipschitz_root_check(Hamiltonian::transport_power([](const Vec&) { return 4.0; }, 2.0), 2, 3.0, xs, 2000, 1);
    EXPECT_TRUE(lin.passes);
    EXPECT_NEAR(lin.L, 2.0, 1e-3);  // H^{1/2} = 2|q|
    const LipschitzCheckResult zero =
        lipschitz_root_check(Hamiltonian::constant(2.0), 2, 3.0, xs, 500, 1);
    EXPECT_EQ(zero.L, 0.0);
}

TEST(Operators, HamiltonianInvariants) {
    const auto xs = some_points(3, 8, 15);
    const Hamiltonian good = Hamiltonian::separable([](const Vec&, double r) { return std::exp(r); }, 1.0);
    const HamiltonianInvariantReport g = check_hamiltonian(good, 2, xs, 2.0, 2.0, 500, 2);
    EXPECT_EQ(g.negative_values, 0u);
    EXPECT_EQ(g.monotonicity_violations, 0u);
    const Hamiltonian bad = Hamiltonian::custom([](const Vec&, double r, const Vec&) { return -r; }, true, true,
                                                false, true);
    const HamiltonianInvariantReport b = check_hamiltonian(bad, 2, xs, 2.0, 2.0, 500, 2);
    EXPECT_GT(b.negative_values, 0u);
    EXPECT_GT(b.monotonicity_violations, 0u);
}

TEST(Operators, HamiltonianFactories) {
    Vec q(2);
    q << 3.0, 4.0;
    const Vec x = Vec::Zero(3);
    EXPECT_DOUBLE_EQ(Hamiltonian::gauss([](const Vec&, double) { return 2.0; }, 2)(x, 0.0, q), 2.0 * 26.0 * 26.0);
    EXPECT_DOUBLE_EQ(Hamiltonian::transport_power([](const Vec&) { return 2.0; }, 1.0)(x, 0.0, q), 10.0);
    EXPECT_DOUBLE_EQ(Hamiltonian::constant(3.0).root(x, 0.0, q, 2), std::sqrt(3.0));
    EXPECT_TRUE(Hamiltonian::gauss([](const Vec&, double) { return 1.0; }, 2).radial_in_q());
    EXPECT_THROW(Hamiltonian::constant(-1.0), InputError);
    EXPECT_THROW(Hamiltonian::separable([](const Vec&, double) { return 1.0; }, -1.0), InputError);
}
