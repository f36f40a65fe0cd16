#include "carnot_ma/diagnostics.hpp"

#include "carnot_ma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace carnot_ma {

double characteristic_defect(const DomainSpec& domain, const FieldFamily& family, const Vec& z) {
    const Vec grad = domain.phi_jet(z).gradient;
    const double norm = grad.norm();
    if (norm == 0.0) throw DomainError("characteristic_defect: D Phi vanishes at a boundary point");
    return (family.sigma(z).transpose() * grad).norm() / norm;
}

namespace {

// Residual (sigma^T D Phi, Phi) and its Jacobian.
void system(const DomainSpec& domain, const FieldFamily& family, const Vec& z, Vec& f, Mat& jac) {
    const int n = family.n();
    const int m = family.m();
    const EuclideanJet2 p = domain.phi_jet(z);
    const Mat sigma = family.sigma(z);
    const std::vector<Mat> ds = family.sigma_jacobian(z);
    f.resize(m + 1);
    jac.resize(m + 1, n);
    f.head(m) = sigma.transpose() * p.gradient;
    f(m) = p.value;
    for (int k = 0; k < n; ++k) {
        jac.block(0, k, m, 1) = ds[static_cast<std::size_t>(k)].transpose() * p.gradient + sigma.transpose() * p.hessian.col(k);
    }
    jac.row(m) = p.gradient.transpose();
}

}  // namespace

std::vector<Vec> characteristic_points(const DomainSpec& domain, const FieldFamily& family,
                                       std::span<const Vec> boundary_samples, const CharacteristicOptions& options) {
    std::vector<double> defect(boundary_samples.size());
    for (std::size_t i = 0; i < boundary_samples.size(); ++i) {
        defect[i] = characteristic_defect(domain, family, boundary_samples[i]);
    }
    std::vector<std::size_t> order(boundary_samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return defect[a] < defect[b]; });

    std::vector<Vec> found;
    auto accept = [&](const Vec& z) {
        for (const Vec& y : found) {
            if ((y - z).norm() <= options.merge_radius) return;
        }
        found.push_back(z);
    };
    for (std::size_t r = 0; r < order.size(); ++r) {
        const std::size_t i = order[r];
        if (r >= options.seeds && defect[i] > options.seed_threshold) break;
        Vec z = boundary_samples[i];
        if (defect[i] <= options.tol_char) {
            accept(z);
            continue;
        }
        Vec f;
        Mat jac;
        for (int it = 0; it < options.max_newton; ++it) {
            system(domain, family, z, f, jac);
            if (f.norm() <= 1e-15) break;
            const Vec step = jac.completeOrthogonalDecomposition().solve(f);
            z -= step;
            if (step.norm() <= 1e-15 * (1.0 + z.norm())) break;
        }
        if (!domain.bounding_box().contains(z)) continue;
        if (std::abs(domain.phi(z)) > 1e-10) continue;
        if (characteristic_defect(domain, family, z) <= options.tol_char) accept(z);
    }
    return found;
}

ComparisonResult comparison_check(const GridFunction& u, const GridFunction& v, double tol_cmp) {
    if (&u.grid() != &v.grid() && u.grid().lattice_size() != v.grid().lattice_size()) {
        throw InputError("comparison_check: grid functions live on different grids");
    }
    ComparisonResult r;
    r.sup_interior_gap = -std::numeric_limits<double>::infinity();
    for (std::int32_t id : u.grid().interior()) r.sup_interior_gap = std::max(r.sup_interior_gap, u.at(id) - v.at(id));
    for (std::size_t b = 0; b < u.boundary_values().size(); ++b) {
        r.max_boundary_gap = std::max(r.max_boundary_gap, u.boundary_values()[b] - v.boundary_values()[b]);
    }
    r.holds = r.sup_interior_gap <= r.max_boundary_gap + tol_cmp;
    return r;
}

}  // namespace carnot_ma
