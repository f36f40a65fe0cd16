#include "carnot_ma/error.hpp"
#include "carnot_ma/expression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace carnot_ma;

namespace {

double eval(const char* text, std::vector<double> x) {
    const VariableSet vars = VariableSet::coordinates(static_cast<int>(x.size()));
    return Expression::parse(text, vars).evaluate(x);
}

std::string code_of(const char* text, int n = 3) {
    try {
        Expression::parse(text, VariableSet::coordinates(n));
    } catch (const ConfigError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST(Expression, Precedence) {
    EXPECT_DOUBLE_EQ(eval("1 + 2 * 3", {}), 7.0);
    EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3", {}), 9.0);
    EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2", {}), 512.0);  // right associative
    EXPECT_DOUBLE_EQ(eval("-2 ^ 2", {}), -4.0);
    EXPECT_DOUBLE_EQ(eval("8 / 4 / 2", {}), 1.0);
    EXPECT_DOUBLE_EQ(eval("2 ^ -1", {}), 0.5);
    EXPECT_DOUBLE_EQ(eval("1e-3 * 1000", {}), 1.0);
}

TEST(Expression, CoordinatesAndTAlias) {
    EXPECT_DOUBLE_EQ(eval("x1 + 10*x2 + 100*x3", {1, 2, 3}), 321.0);
    EXPECT_DOUBLE_EQ(eval("t", {1, 2, 3}), 3.0);
    EXPECT_NEAR(eval("exp(x1) * exp(-x1)", {0.7}), 1.0, 1e-15);
}

TEST(Expression, HeisenbergGauge) {
    const std::vector<double> x{0.3, -0.4, 0.2};
    const double psi = 0.25;
    EXPECT_NEAR(eval("(x1^2 + x2^2)^2 + t^2", x), psi * psi + 0.04, 1e-15);
}

TEST(Expression, SymbolicDerivativeMatchesDifferences) {
    const VariableSet vars = VariableSet::coordinates(2);
    const Expression e = Expression::parse("exp(x1*x2) + x1^3 / (1 + x2^2)", vars);
    std::vector<double> x{0.4, -0.7};
    for (int s = 0; s < 2; ++s) {
        const Expression d = e.derivative(s);
        std::vector<double> xp = x, xm = x;
        xp[s] += 1e-6;
        xm[s] -= 1e-6;
        EXPECT_NEAR(d.evaluate(x), (e.evaluate(xp) - e.evaluate(xm)) / 2e-6, 1e-7);
    }
}

TEST(Expression, FieldJetIsExactForPolynomials) {
    const ExpressionField f = ExpressionField::parse("x1^2*x2 + 3*x2^2", 2);
    Vec x(2);
    x << 1.5, -2.0;
    const EuclideanJet2 j = f.jet(x);
    EXPECT_DOUBLE_EQ(j.value, 1.5 * 1.5 * -2.0 + 12.0);
    EXPECT_DOUBLE_EQ(j.gradient(0), 2 * 1.5 * -2.0);
    EXPECT_DOUBLE_EQ(j.gradient(1), 1.5 * 1.5 + 6 * -2.0);
    EXPECT_DOUBLE_EQ(j.hessian(0, 0), -4.0);
    EXPECT_DOUBLE_EQ(j.hessian(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(j.hessian(1, 0), 3.0);
    EXPECT_DOUBLE_EQ(j.hessian(1, 1), 6.0);
}

TEST(Expression, ConstantFolding) {
    const Expression e = Expression::parse("2*3 + exp(0)", VariableSet::coordinates(1));
    EXPECT_TRUE(e.is_constant());
    EXPECT_DOUBLE_EQ(e.constant_value(), 7.0);
    EXPECT_EQ(e.max_slot(), -1);
}

TEST(Expression, SyntaxErrors) {
    for (const char* bad : {"", "1 +", "(x1", "x1 x2", "x9", "x1 ^ x2", "exp x1", "2 $ 3", "sin(x1)"}) {
        EXPECT_EQ(code_of(bad), "expr.syntax") << bad;
    }
}

TEST(Expression, ErrorMentionsColumn) {
    try {
        Expression::parse("x1 + y", VariableSet::coordinates(2));
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("column 6"), std::string::npos) << e.what();
    }
}
