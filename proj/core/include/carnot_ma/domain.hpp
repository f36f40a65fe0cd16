#pragma once

#include "carnot_ma/jets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace carnot_ma {

struct Box {
    Vec lo;
    Vec hi;

    bool contains(const Vec& x) const;
    double diagonal() const { return (hi - lo).norm(); }
};

/// Smooth domain Omega = { Phi > 0 } with D Phi != 0 on the boundary, plus an
/// axis-aligned box containing { Phi >= 0 } and a point from which the domain is
/// star-shaped (used for boundary sampling).
class DomainSpec {
public:
    /// |x|_H < R in the j-th Heisenberg group: Phi = R^4 - (sum_{i<=2j} x_i^2)^2 - t^2.
    static DomainSpec koranyi_ball(double radius, int j = 1);
    /// Euclidean ball: Phi = R^2 - |x - c|^2.
    static DomainSpec euclidean_ball(double radius, const Vec& center);
    static DomainSpec custom(SmoothFunction phi, Box bounding_box, Vec star_center, std::string name = "custom");

    int dimension() const { return static_cast<int>(box_.lo.size()); }
    const std::string& name() const { return name_; }
    const Box& bounding_box() const { return box_; }
    const Vec& star_center() const { return center_; }

    double phi(const Vec& x) const { return phi_.value(x); }
    EuclideanJet2 phi_jet(const Vec& x) const { return phi_.jet(x); }
    const SmoothFunction& phi_function() const { return phi_; }
    bool contains(const Vec& x) const { return phi_.value(x) > 0.0; }

    /// For a inside and b outside, the point on [a, b] where Phi = 0, located by
    /// bisection until the parameter interval is below `tol`. Returns the
    /// parameter s in (0, 1].
    double crossing_parameter(const Vec& a, const Vec& b, double tol = 1e-12) const;

    /// Boundary point on the ray from the star center along `direction`.
    Vec boundary_along(const Vec& direction) const;

    /// Boundary points along seeded random directions plus the +- coordinate axes.
    std::vector<Vec> boundary_samples(std::size_t count, std::uint64_t seed) const;

    /// Rejection samples with Phi > phi_margin.
    std::vector<Vec> interior_samples(std::size_t count, std::uint64_t seed, double phi_margin = 0.0) const;

    /// Rejection samples from a sub-region given by an indicator.
    template <typename Pred>
    std::vector<Vec> samples_where(std::size_t count, std::uint64_t seed, Pred&& pred) const;

    /// min |D Phi| over boundary samples (must be > 0).
    double min_boundary_gradient(std::size_t count, std::uint64_t seed) const;

private:
    SmoothFunction phi_;
    Box box_;
    Vec center_;
    std::string name_;

};

/// Homogeneous gauge w = (x_1^2 + ... + x_{2j}^2)^2 + t^2 on R^{2j+1}.
double heisenberg_gauge(const Vec& x);

}  // namespace carnot_ma

#include "carnot_ma/random.hpp"

namespace carnot_ma {

template <typename Pred>
std::vector<Vec> DomainSpec::samples_where(std::size_t count, std::uint64_t seed, Pred&& pred) const {
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(count);
    const int n = dimension();
    std::size_t attempts = 0;
    while (out.size() < count && attempts < 1000 * count + 100000) {
        ++attempts;
        Vec x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(box_.lo(i), box_.hi(i));
        if (contains(x) && pred(x)) out.push_back(x);
    }
    return out;
}

}  // namespace carnot_ma
