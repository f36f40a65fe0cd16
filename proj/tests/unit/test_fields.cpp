#include "carnot_ma/error.hpp"
#include "carnot_ma/fields.hpp"
#include "carnot_ma/random.hpp"

#include <gtest/gtest.h>

using namespace carnot_ma;

namespace {

Vec v3(double a, double b, double c) {
    Vec x(3);
    x << a, b, c;
    return x;
}

// X1 = d1, X2 = x1 d2 (not of the [I; tau] shape).
FieldFamily grushin() {
    auto sigma = [](const Vec& x) {
        Mat s = Mat::Zero(2, 2);
        s(0, 0) = 1.0;
        s(1, 1) = x(0);
        return s;
    };
    auto jac = [](const Vec&) {
        std::vector<Mat> d(2, Mat::Zero(2, 2));
        d[0](1, 1) = 1.0;
        return d;
    };
    return FieldFamily::general(2, 2, sigma, jac, Smoothness::c2, "grushin");
}

}  // namespace

TEST(Fields, HeisenbergSigma) {
    const FieldFamily h = FieldFamily::heisenberg(1);
    EXPECT_EQ(h.n(), 3);
    EXPECT_EQ(h.m(), 2);
    EXPECT_EQ(h.name(), "heisenberg1");
    const Mat s = h.sigma(v3(0.5, -0.25, 3.0));
    EXPECT_DOUBLE_EQ(s(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(s(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(s(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(s(2, 0), 2.0 * -0.25);
    EXPECT_DOUBLE_EQ(s(2, 1), -2.0 * 0.5);
}

TEST(Fields, HeisenbergQVanishes) {
    Rng rng(3);
    const FieldFamily h = FieldFamily::heisenberg(2);
    for (int i = 0; i < 50; ++i) {
        const Vec x = rng.normal_vector(5);
        const Vec p = rng.normal_vector(5);
        EXPECT_LT(h.q_matrix(x, p).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_TRUE(h.q_vanishes_at(x, 1e-14));
    }
}

TEST(Fields, GrushinQ) {
    const FieldFamily g = grushin();
    Vec x(2), p(2);
    x << 0.3, 0.7;
    p << 2.0, 5.0;
    const Mat q = g.q_matrix(x, p);
    EXPECT_NEAR(q(0, 1), 2.5, 1e-14);
    EXPECT_NEAR(q(1, 0), 2.5, 1e-14);
    EXPECT_NEAR(q(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(q(1, 1), 0.0, 1e-14);
    EXPECT_FALSE(g.declared_carnot_type());
    EXPECT_THROW(g.tau(x), InputError);
}

TEST(Fields, QSlicesAreLinearInP) {
    const FieldFamily g = grushin();
    Vec x(2), p(2);
    x << -0.4, 1.1;
    p << 0.3, -1.7;
    const std::vector<Mat> sl = g.q_slices(x);
    Mat sum = Mat::Zero(2, 2);
    for (int k = 0; k < 2; ++k) sum += p(k) * sl[static_cast<std::size_t>(k)];
    EXPECT_LT((sum - g.q_matrix(x, p)).norm(), 1e-14);
}

TEST(Fields, ValidationAcceptsPresets) {
    Rng rng(4);
    std::vector<Vec> samples;
    for (int i = 0; i < 20; ++i) samples.push_back(rng.normal_vector(3));
    const CarnotValidationReport r = validate_carnot_type(FieldFamily::heisenberg(1), samples);
    EXPECT_TRUE(r.valid) << r.message;
    EXPECT_TRUE(r.identity_block);
    EXPECT_EQ(r.samples_checked, samples.size());
}

TEST(Fields, ValidationRejectsGeneralShape) {
    Rng rng(5);
    std::vector<Vec> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(rng.normal_vector(2));
    const CarnotValidationReport r = validate_carnot_type(grushin(), samples);
    EXPECT_FALSE(r.valid);
}

TEST(Fields, ValidationCatchesWrongJacobian) {
    auto tau = [](const Vec& x) {
        Mat t(1, 2);
        t << 2.0 * x(1), -2.0 * x(0);
        return t;
    };
    auto wrong = [](const Vec&) { return std::vector<Mat>(3, Mat::Zero(1, 2)); };
    const FieldFamily f = FieldFamily::carnot_type(3, 2, tau, wrong);
    std::vector<Vec> samples{v3(0.1, 0.2, 0.3), v3(-0.5, 0.4, 1.0)};
    const CarnotValidationReport r = validate_carnot_type(f, samples);
    EXPECT_FALSE(r.valid);
    EXPECT_GT(r.max_jacobian_residual, 1.0);
}

TEST(Fields, ExpressionFamilyMatchesHeisenberg) {
    const FieldFamily e = carnot_family_from_expressions(3, 2, {{"2*x2", "-2*x1"}});
    const FieldFamily h = FieldFamily::heisenberg(1);
    Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        const Vec x = rng.normal_vector(3);
        EXPECT_LT((e.sigma(x) - h.sigma(x)).norm(), 1e-15);
        const auto je = e.sigma_jacobian(x);
        const auto jh = h.sigma_jacobian(x);
        for (int k = 0; k < 3; ++k) EXPECT_LT((je[k] - jh[k]).norm(), 1e-15);
    }
}

TEST(Fields, DimensionMismatchThrows) {
    const FieldFamily h = FieldFamily::heisenberg(1);
    EXPECT_THROW(h.sigma(Vec::Zero(2)), InputError);
    EXPECT_THROW(FieldFamily::heisenberg(0), InputError);
    EXPECT_THROW(carnot_family_from_expressions(3, 2, {{"x1"}}), InputError);
}

TEST(Fields, XSquareMargin) {
    std::vector<Vec> samples{v3(0.0, 0.0, 0.0), v3(1.0, 2.0, -1.0)};
    EXPECT_GT(xsquare_margin(FieldFamily::heisenberg(1), samples), 0.0);
    EXPECT_NEAR(xsquare_margin(FieldFamily::euclidean(3), samples), 1.0, 1e-14);
}
