#include "carnot_ma/domain.hpp"

#include "carnot_ma/error.hpp"
#include "carnot_ma/random.hpp"

#include <cmath>
#include <limits>

namespace carnot_ma {

bool Box::contains(const Vec& x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) < lo(i) || x(i) > hi(i)) return false;
    }
    return true;
}

double heisenberg_gauge(const Vec& x) {
    const Eigen::Index n = x.size();
    double psi = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) psi += x(i) * x(i);
    return psi * psi + x(n - 1) * x(n - 1);
}

DomainSpec DomainSpec::koranyi_ball(double radius, int j) {
    if (!(radius > 0.0)) throw InputError("koranyi_ball: radius must be positive");
    const int n = 2 * j + 1;
    const double r4 = radius * radius * radius * radius;
    SmoothFunction phi{
        [r4](const Vec& x) { return r4 - heisenberg_gauge(x); },
        [r4, n](const Vec& x) {
            double psi = 0.0;
            for (int i = 0; i < n - 1; ++i) psi += x(i) * x(i);
            const double t = x(n - 1);
            EuclideanJet2 jet{r4 - psi * psi - t * t, Vec::Zero(n), Mat::Zero(n, n)};
            for (int i = 0; i < n - 1; ++i) {
                jet.gradient(i) = -4.0 * psi * x(i);
                for (int k = 0; k < n - 1; ++k) {
                    jet.hessian(i, k) = -8.0 * x(i) * x(k) - (i == k ? 4.0 * psi : 0.0);
                }
            }
            jet.gradient(n - 1) = -2.0 * t;
            jet.hessian(n - 1, n - 1) = -2.0;
            return jet;
        }};
    Box box{Vec::Constant(n, -radius), Vec::Constant(n, radius)};
    box.lo(n - 1) = -radius * radius;
    box.hi(n - 1) = radius * radius;
    DomainSpec d;
    d.phi_ = std::move(phi);
    d.box_ = std::move(box);
    d.center_ = Vec::Zero(n);
    d.name_ = "koranyi_ball";
    return d;
}

DomainSpec DomainSpec::euclidean_ball(double radius, const Vec& center) {
    if (!(radius > 0.0)) throw InputError("euclidean_ball: radius must be positive");
    const int n = static_cast<int>(center.size());
    const double r2 = radius * radius;
    SmoothFunction phi{[r2, center](const Vec& x) { return r2 - (x - center).squaredNorm(); },
                       [r2, center, n](const Vec& x) {
                           return EuclideanJet2{r2 - (x - center).squaredNorm(), -2.0 * (x - center),
                                                -2.0 * Mat::Identity(n, n)};
                       }};
    DomainSpec d;
    d.phi_ = std::move(phi);
    d.box_ = {center.array() - radius, center.array() + radius};
    d.center_ = center;
    d.name_ = "euclidean_ball";
    return d;
}

DomainSpec DomainSpec::custom(SmoothFunction phi, Box bounding_box, Vec star_center, std::string name) {
    if (bounding_box.lo.size() != bounding_box.hi.size() || bounding_box.lo.size() != star_center.size()) {
        throw InputError("custom domain: bounding box and center dimensions differ");
    }
    DomainSpec d;
    d.phi_ = std::move(phi);
    d.box_ = std::move(bounding_box);
    d.center_ = std::move(star_center);
    d.name_ = std::move(name);
    if (!d.contains(d.center_)) throw InputError("custom domain: star center must lie inside the domain");
    return d;
}

double DomainSpec::crossing_parameter(const Vec& a, const Vec& b, double tol) const {
    double lo = 0.0;
    double hi = 1.0;
    if (phi(b) > 0.0) return 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (phi(a + mid * (b - a)) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Vec DomainSpec::boundary_along(const Vec& direction) const {
    const double reach = 2.0 * box_.diagonal();
    const Vec d = direction / direction.norm();
    // March to the first exit before bisecting so nonconvex star domains work.
    const int steps = 256;
    Vec prev = center_;
    for (int k = 1; k <= steps; ++k) {
        const Vec cur = center_ + d * (reach * k / steps);
        if (!contains(cur)) {
            const double s = crossing_parameter(prev, cur, 1e-15);
            return prev + s * (cur - prev);
        }
        prev = cur;
    }
    throw DomainError("boundary_along: ray does not leave the domain");
}

std::vector<Vec> DomainSpec::boundary_samples(std::size_t count, std::uint64_t seed) const {
    const int n = dimension();
    std::vector<Vec> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(boundary_along(Vec::Unit(n, i)));
        out.push_back(boundary_along(-Vec::Unit(n, i)));
    }
    Rng rng(seed);
    while (out.size() < count) out.push_back(boundary_along(rng.unit_vector(n)));
    return out;
}

std::vector<Vec> DomainSpec::interior_samples(std::size_t count, std::uint64_t seed, double phi_margin) const {
    return samples_where(count, seed, [this, phi_margin](const Vec& x) { return phi(x) > phi_margin; });
}

double DomainSpec::min_boundary_gradient(std::size_t count, std::uint64_t seed) const {
    double g = std::numeric_limits<double>::infinity();
    for (const Vec& z : boundary_samples(count, seed)) g = std::min(g, phi_jet(z).gradient.norm());
    return g;
}

}  // namespace carnot_ma
