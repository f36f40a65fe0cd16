#pragma once

#include "carnot_ma/domain.hpp"
#include "carnot_ma/fields.hpp"
#include "carnot_ma/grid.hpp"

#include <span>
#include <vector>

namespace carnot_ma {

struct CharacteristicOptions {
    double tol_char = 1e-8;
    std::size_t seeds = 16;          // lowest |sigma^T n| samples refined by Gauss-Newton
    double seed_threshold = 0.1;     // every sample below this is refined as well
    double merge_radius = 1e-6;
    int max_newton = 60;
};

/// |sigma(z)^T n(z)| with n = -D Phi / |D Phi|.
double characteristic_defect(const DomainSpec& domain, const FieldFamily& family, const Vec& z);

/// Boundary points where sigma^T n vanishes. Candidates are taken from the
/// samples and refined on { Phi = 0, sigma^T D Phi = 0 } by minimum-norm
/// Gauss-Newton with exact jets; a point is kept when its defect is <= tol_char.
std::vector<Vec> characteristic_points(const DomainSpec& domain, const FieldFamily& family,
                                       std::span<const Vec> boundary_samples,
                                       const CharacteristicOptions& options = {});

struct ComparisonResult {
    double sup_interior_gap = 0.0;  // max over interior nodes of u - v
    double max_boundary_gap = 0.0;  // max over boundary crossings of (u - v)^+
    bool holds = false;
};

/// sup_interior (u - v) <= max_boundary (u - v)^+ + tol_cmp on a common grid.
ComparisonResult comparison_check(const GridFunction& u, const GridFunction& v, double tol_cmp);

}  // namespace carnot_ma
