#pragma once

#include "carnot_ma/jets.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace carnot_ma {

/// Names bound to evaluation slots. Aliases map several names to one slot.
class VariableSet {
public:
    VariableSet() = default;

    /// x1..xn; when `t_alias` is set, `t` also names the last coordinate.
    static VariableSet coordinates(int n, bool t_alias = true);

    /// Adds a new slot and returns its index.
    int add(std::string name);
    void alias(std::string name, int slot);

    /// Slot for `name`, or -1.
    int find(std::string_view name) const;
    int size() const { return slot_count_; }

private:
    std::vector<std::pair<std::string, int>> names_;
    int slot_count_ = 0;
};

/// Immutable arithmetic expression over numbered slots. The grammar is
/// numbers, identifiers, + - * / ^ (right associative), unary minus,
/// exp(...) and parentheses.
class Expression {
public:
    struct Node;

    Expression();  // the constant 0

    static Expression parse(std::string_view text, const VariableSet& vars);
    static Expression constant(double c);
    static Expression variable(int slot);

    double evaluate(std::span<const double> slots) const;
    double operator()(std::span<const double> slots) const { return evaluate(slots); }

    /// Symbolic partial derivative. Exponents must be constant.
    Expression derivative(int slot) const;

    bool is_constant() const;
    double constant_value() const;  // valid when is_constant()
    int max_slot() const;           // -1 when no variables
    std::string to_string() const;

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a);
    friend Expression pow(const Expression& base, double exponent);
    friend Expression exp(const Expression& a);

private:
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Expression in the coordinates x1..xn with exact gradient and Hessian built
/// by symbolic differentiation once at construction.
class ExpressionField {
public:
    ExpressionField(Expression expr, int n);
    static ExpressionField parse(std::string_view text, int n);

    int dimension() const { return n_; }
    double value(const Vec& x) const;
    EuclideanJet2 jet(const Vec& x) const;
    const Expression& expression() const { return expr_; }
    SmoothFunction as_function() const;

private:
    Expression expr_;
    int n_;
    std::vector<Expression> gradient_;
    std::vector<Expression> hessian_;  // row-major upper triangle
};

}  // namespace carnot_ma
