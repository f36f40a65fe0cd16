#include "carnot_ma/expression.hpp"

#include "carnot_ma/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace carnot_ma {

enum class Op { constant, variable, add, sub, mul, div, neg, pow, exp };

struct Expression::Node {
    Op op;
    double value = 0.0;  // constant value or exponent of pow
    int slot = -1;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double c) {
    return std::make_shared<const Expression::Node>(Expression::Node{Op::constant, c, -1, nullptr, nullptr});
}

bool is_const(const NodePtr& n, double c) { return n->op == Op::constant && n->value == c; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    if (a->op == Op::constant && b->op == Op::constant) {
        switch (op) {
            case Op::add: return make_const(a->value + b->value);
            case Op::sub: return make_const(a->value - b->value);
            case Op::mul: return make_const(a->value * b->value);
            case Op::div: return make_const(a->value / b->value);
            default: break;
        }
    }
    switch (op) {
        case Op::add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case Op::sub:
            if (is_const(b, 0.0)) return a;
            break;
        case Op::mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case Op::div:
            if (is_const(a, 0.0)) return make_const(0.0);
            if (is_const(b, 1.0)) return a;
            break;
        default:
            break;
    }
    return std::make_shared<const Expression::Node>(Expression::Node{op, 0.0, -1, std::move(a), std::move(b)});
}

NodePtr make_neg(NodePtr a) {
    if (a->op == Op::constant) return make_const(-a->value);
    if (a->op == Op::neg) return a->lhs;
    return std::make_shared<const Expression::Node>(Expression::Node{Op::neg, 0.0, -1, std::move(a), nullptr});
}

NodePtr make_pow(NodePtr base, double exponent) {
    if (exponent == 0.0) return make_const(1.0);
    if (exponent == 1.0) return base;
    if (base->op == Op::constant) return make_const(std::pow(base->value, exponent));
    return std::make_shared<const Expression::Node>(Expression::Node{Op::pow, exponent, -1, std::move(base), nullptr});
}

NodePtr make_exp(NodePtr a) {
    if (a->op == Op::constant) return make_const(std::exp(a->value));
    return std::make_shared<const Expression::Node>(Expression::Node{Op::exp, 0.0, -1, std::move(a), nullptr});
}

double int_pow(double base, long long e) {
    const bool invert = e < 0;
    unsigned long long k = invert ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    double result = 1.0;
    while (k != 0) {
        if (k & 1ULL) result *= base;
        base *= base;
        k >>= 1ULL;
    }
    return invert ? 1.0 / result : result;
}

double power(double base, double exponent) {
    if (exponent == std::trunc(exponent) && std::abs(exponent) <= 64.0) {
        return int_pow(base, static_cast<long long>(exponent));
    }
    return std::pow(base, exponent);
}

double eval(const Expression::Node& n, std::span<const double> slots) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::variable: return slots[static_cast<std::size_t>(n.slot)];
        case Op::add: return eval(*n.lhs, slots) + eval(*n.rhs, slots);
        case Op::sub: return eval(*n.lhs, slots) - eval(*n.rhs, slots);
        case Op::mul: return eval(*n.lhs, slots) * eval(*n.rhs, slots);
        case Op::div: return eval(*n.lhs, slots) / eval(*n.rhs, slots);
        case Op::neg: return -eval(*n.lhs, slots);
        case Op::pow: return power(eval(*n.lhs, slots), n.value);
        case Op::exp: return std::exp(eval(*n.lhs, slots));
    }
    return 0.0;
}

NodePtr differentiate(const NodePtr& n, int slot) {
    switch (n->op) {
        case Op::constant: return make_const(0.0);
        case Op::variable: return make_const(n->slot == slot ? 1.0 : 0.0);
        case Op::add: return make_binary(Op::add, differentiate(n->lhs, slot), differentiate(n->rhs, slot));
        case Op::sub: return make_binary(Op::sub, differentiate(n->lhs, slot), differentiate(n->rhs, slot));
        case Op::mul:
            return make_binary(Op::add, make_binary(Op::mul, differentiate(n->lhs, slot), n->rhs),
                               make_binary(Op::mul, n->lhs, differentiate(n->rhs, slot)));
        case Op::div: {
            // (f/g)' = f'/g - f g'/g^2
            auto first = make_binary(Op::div, differentiate(n->lhs, slot), n->rhs);
            auto second = make_binary(Op::div, make_binary(Op::mul, n->lhs, differentiate(n->rhs, slot)),
                                      make_pow(n->rhs, 2.0));
            return make_binary(Op::sub, first, second);
        }
        case Op::neg: return make_neg(differentiate(n->lhs, slot));
        case Op::pow: {
            auto inner = differentiate(n->lhs, slot);
            if (is_const(inner, 0.0)) return make_const(0.0);
            auto outer = make_binary(Op::mul, make_const(n->value), make_pow(n->lhs, n->value - 1.0));
            return make_binary(Op::mul, outer, inner);
        }
        case Op::exp: return make_binary(Op::mul, n, differentiate(n->lhs, slot));
    }
    return make_const(0.0);
}

int max_slot_of(const Expression::Node& n) {
    int m = n.op == Op::variable ? n.slot : -1;
    if (n.lhs) m = std::max(m, max_slot_of(*n.lhs));
    if (n.rhs) m = std::max(m, max_slot_of(*n.rhs));
    return m;
}

void print(const Expression::Node& n, std::ostringstream& os) {
    switch (n.op) {
        case Op::constant: os << n.value; return;
        case Op::variable: os << "$" << n.slot; return;
        case Op::neg: os << "(-"; print(*n.lhs, os); os << ")"; return;
        case Op::exp: os << "exp("; print(*n.lhs, os); os << ")"; return;
        case Op::pow: os << "("; print(*n.lhs, os); os << ")^" << n.value; return;
        default: break;
    }
    const char* sym = n.op == Op::add ? "+" : n.op == Op::sub ? "-" : n.op == Op::mul ? "*" : "/";
    os << "(";
    print(*n.lhs, os);
    os << sym;
    print(*n.rhs, os);
    os << ")";
}

class Parser {
public:
    Parser(std::string_view text, const VariableSet& vars) : text_(text), vars_(vars) {}

    NodePtr parse() {
        auto n = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        }
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expr.syntax", "expression \"" + std::string(text_) + "\" at column " +
                                             std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        auto lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Op::add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = make_binary(Op::sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Op::mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_binary(Op::div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_neg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (accept('^')) {
            auto exponent = parse_unary();
            if (exponent->op != Op::constant) {
                fail("exponent must be a constant");
            }
            return make_pow(base, exponent->value);
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc()) fail("malformed number");
            pos_ += static_cast<std::size_t>(ptr - begin);
            return make_const(value);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "exp") {
                if (!accept('(')) fail("expected '(' after exp");
                auto arg = parse_sum();
                if (!accept(')')) fail("expected ')'");
                return make_exp(arg);
            }
            const int slot = vars_.find(name);
            if (slot < 0) {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            return std::make_shared<const Expression::Node>(Expression::Node{Op::variable, 0.0, slot, nullptr, nullptr});
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const VariableSet& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

VariableSet VariableSet::coordinates(int n, bool t_alias) {
    VariableSet v;
    for (int i = 1; i <= n; ++i) {
        v.add("x" + std::to_string(i));
    }
    if (t_alias && n > 0) {
        v.alias("t", n - 1);
    }
    return v;
}

int VariableSet::add(std::string name) {
    names_.emplace_back(std::move(name), slot_count_);
    return slot_count_++;
}

void VariableSet::alias(std::string name, int slot) { names_.emplace_back(std::move(name), slot); }

int VariableSet::find(std::string_view name) const {
    for (const auto& [key, slot] : names_) {
        if (key == name) return slot;
    }
    return -1;
}

Expression::Expression() : node_(make_const(0.0)) {}

Expression Expression::parse(std::string_view text, const VariableSet& vars) {
    return Expression(Parser(text, vars).parse());
}

Expression Expression::constant(double c) { return Expression(make_const(c)); }

Expression Expression::variable(int slot) {
    return Expression(std::make_shared<const Node>(Node{Op::variable, 0.0, slot, nullptr, nullptr}));
}

double Expression::evaluate(std::span<const double> slots) const { return eval(*node_, slots); }

Expression Expression::derivative(int slot) const { return Expression(differentiate(node_, slot)); }

bool Expression::is_constant() const { return node_->op == Op::constant; }

double Expression::constant_value() const { return node_->value; }

int Expression::max_slot() const { return max_slot_of(*node_); }

std::string Expression::to_string() const {
    std::ostringstream os;
    print(*node_, os);
    return os.str();
}

Expression operator+(const Expression& a, const Expression& b) { return Expression(make_binary(Op::add, a.node_, b.node_)); }
Expression operator-(const Expression& a, const Expression& b) { return Expression(make_binary(Op::sub, a.node_, b.node_)); }
Expression operator*(const Expression& a, const Expression& b) { return Expression(make_binary(Op::mul, a.node_, b.node_)); }
Expression operator/(const Expression& a, const Expression& b) { return Expression(make_binary(Op::div, a.node_, b.node_)); }
Expression operator-(const Expression& a) { return Expression(make_neg(a.node_)); }
Expression pow(const Expression& base, double exponent) { return Expression(make_pow(base.node_, exponent)); }
Expression exp(const Expression& a) { return Expression(make_exp(a.node_)); }

ExpressionField::ExpressionField(Expression expr, int n) : expr_(std::move(expr)), n_(n) {
    if (expr_.max_slot() >= n) {
        throw InputError("ExpressionField: expression references slot beyond dimension " + std::to_string(n));
    }
    gradient_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        gradient_.push_back(expr_.derivative(i));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            hessian_.push_back(gradient_[static_cast<std::size_t>(i)].derivative(j));
        }
    }
}

ExpressionField ExpressionField::parse(std::string_view text, int n) {
    return {Expression::parse(text, VariableSet::coordinates(n)), n};
}

double ExpressionField::value(const Vec& x) const {
    if (x.size() != n_) throw InputError("ExpressionField: point has wrong dimension");
    return expr_.evaluate({x.data(), static_cast<std::size_t>(x.size())});
}

EuclideanJet2 ExpressionField::jet(const Vec& x) const {
    if (x.size() != n_) throw InputError("ExpressionField: point has wrong dimension");
    const std::span<const double> s{x.data(), static_cast<std::size_t>(x.size())};
    EuclideanJet2 j{expr_.evaluate(s), Vec(n_), Mat(n_, n_)};
    for (int i = 0; i < n_; ++i) {
        j.gradient(i) = gradient_[static_cast<std::size_t>(i)].evaluate(s);
    }
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i) {
        for (int c = i; c < n_; ++c) {
            const double v = hessian_[k++].evaluate(s);
            j.hessian(i, c) = v;
            j.hessian(c, i) = v;
        }
    }
    return j;
}

SmoothFunction ExpressionField::as_function() const {
    auto self = std::make_shared<const ExpressionField>(*this);
    return {[self](const Vec& x) { return self->value(x); }, [self](const Vec& x) { return self->jet(x); }};
}

}  // namespace carnot_ma
