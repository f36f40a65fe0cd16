#include "carnot_ma/hamiltonian.hpp"

#include "carnot_ma/error.hpp"

#include <cmath>

namespace carnot_ma {

std::string to_string(HamiltonianKind kind) {
    switch (kind) {
        case HamiltonianKind::source_term: return "source_term";
        case HamiltonianKind::separable: return "separable";
        case HamiltonianKind::gauss: return "gauss";
        case HamiltonianKind::transport: return "transport";
        case HamiltonianKind::constant: return "constant";
        case HamiltonianKind::custom: return "custom";
    }
    return "unknown";
}

Hamiltonian Hamiltonian::source_term(XField f) {
    Hamiltonian h;
    h.kind_ = HamiltonianKind::source_term;
    h.fn_ = [f = std::move(f)](const Vec& x, double, const Vec&) { return f(x); };
    return h;
}

Hamiltonian Hamiltonian::separable(XRField k, double alpha) {
    if (alpha < 0.0) throw InputError("separable Hamiltonian: alpha must be >= 0");
    Hamiltonian h;
    h.kind_ = HamiltonianKind::separable;
    h.alpha_ = alpha;
    h.depends_on_r_ = true;
    h.depends_on_q_ = alpha != 0.0;
    h.fn_ = [k = std::move(k), alpha](const Vec& x, double r, const Vec& q) {
        return k(x, r) * std::pow(1.0 + q.squaredNorm(), alpha);
    };
    return h;
}

Hamiltonian Hamiltonian::gauss(XRField k, int m) {
    if (m < 1) throw InputError("gauss Hamiltonian: m must be >= 1");
    Hamiltonian h = separable(std::move(k), 0.5 * (m + 2));
    h.kind_ = HamiltonianKind::gauss;
    return h;
}

Hamiltonian Hamiltonian::transport(XField f, std::function<double(const Vec&)> hq) {
    Hamiltonian h;
    h.kind_ = HamiltonianKind::transport;
    h.depends_on_q_ = true;
    h.radial_ = false;
    h.fn_ = [f = std::move(f), hq = std::move(hq)](const Vec& x, double, const Vec& q) { return f(x) / hq(q); };
    return h;
}

Hamiltonian Hamiltonian::transport_power(XField f, double alpha) {
    Hamiltonian h;
    h.kind_ = HamiltonianKind::transport;
    h.alpha_ = alpha;
    h.depends_on_q_ = true;
    h.radial_ = alpha >= 0.0;
    h.fn_ = [f = std::move(f), alpha](const Vec& x, double, const Vec& q) {
        return f(x) * std::pow(q.norm(), alpha);
    };
    return h;
}

Hamiltonian Hamiltonian::constant(double c) {
    if (c < 0.0) throw InputError("constant Hamiltonian must be nonnegative");
    Hamiltonian h;
    h.kind_ = HamiltonianKind::constant;
    h.fn_ = [c](const Vec&, double, const Vec&) { return c; };
    return h;
}

Hamiltonian Hamiltonian::custom(Fn fn, bool monotone_in_r, bool depends_on_r, bool depends_on_q, bool radial) {
    Hamiltonian h;
    h.kind_ = HamiltonianKind::custom;
    h.fn_ = std::move(fn);
    h.monotone_in_r_ = monotone_in_r;
    h.depends_on_r_ = depends_on_r;
    h.depends_on_q_ = depends_on_q;
    h.radial_ = radial;
    return h;
}

double Hamiltonian::root(const Vec& x, double r, const Vec& q, int m) const {
    const double v = fn_(x, r, q);
    if (!(v > 0.0)) return 0.0;
    return m == 1 ? v : m == 2 ? std::sqrt(v) : std::pow(v, 1.0 / static_cast<double>(m));
}

}  // namespace carnot_ma
