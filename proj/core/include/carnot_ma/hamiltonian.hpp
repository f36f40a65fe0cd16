#pragma once

#include "carnot_ma/jets.hpp"

#include <functional>
#include <optional>
#include <string>

namespace carnot_ma {

enum class HamiltonianKind { source_term, separable, gauss, transport, constant, custom };

std::string to_string(HamiltonianKind kind);

/// Declared constants (L, M, R) of the growth bound H^{1/m}(x,R,p) <= L|p| + M.
struct GrowthBound {
    double L = 0.0;
    double M = 0.0;
    double R = 0.0;
};

/// Nonnegative H(x, r, q) nondecreasing in r. Built through the named
/// factories; `custom` accepts an arbitrary callable.
class Hamiltonian {
public:
    using Fn = std::function<double(const Vec& x, double r, const Vec& q)>;
    using XField = std::function<double(const Vec& x)>;
    using XRField = std::function<double(const Vec& x, double r)>;

    /// H = f(x).
    static Hamiltonian source_term(XField f);
    /// H = k(x, r) (1 + |q|^2)^alpha.
    static Hamiltonian separable(XRField k, double alpha);
    /// Prescribed horizontal Gauss curvature: k(x, r) (1 + |q|^2)^{(m+2)/2}.
    static Hamiltonian gauss(XRField k, int m);
    /// H = f(x) / h(q), h > 0.
    static Hamiltonian transport(XField f, std::function<double(const Vec& q)> h);
    /// H = f(x) |q|^alpha, i.e. transport with h(q) = |q|^{-alpha}.
    static Hamiltonian transport_power(XField f, double alpha);
    static Hamiltonian constant(double c);
    /// `radial` declares that H depends on q only through |q|, nondecreasingly.
    static Hamiltonian custom(Fn fn, bool monotone_in_r, bool depends_on_r, bool depends_on_q, bool radial);

    double operator()(const Vec& x, double r, const Vec& q) const { return fn_(x, r, q); }

    /// H^{1/m}, with negative values clamped to 0.
    double root(const Vec& x, double r, const Vec& q, int m) const;

    HamiltonianKind kind() const { return kind_; }
    bool monotone_in_r() const { return monotone_in_r_; }
    bool depends_on_r() const { return depends_on_r_; }
    bool depends_on_q() const { return depends_on_q_; }
    /// H(x, r, q) = phi(x, r, |q|) with phi nondecreasing in |q|.
    bool radial_in_q() const { return radial_; }
    /// Exponent alpha for separable/gauss kinds (0 otherwise).
    double alpha() const { return alpha_; }

    const std::optional<GrowthBound>& declared_growth() const { return growth_; }
    Hamiltonian& with_growth(GrowthBound g) {
        growth_ = g;
        return *this;
    }

private:
    Hamiltonian() = default;

    HamiltonianKind kind_ = HamiltonianKind::constant;
    Fn fn_;
    bool monotone_in_r_ = true;
    bool depends_on_r_ = false;
    bool depends_on_q_ = false;
    bool radial_ = true;
    double alpha_ = 0.0;
    std::optional<GrowthBound> growth_;
};

}  // namespace carnot_ma
