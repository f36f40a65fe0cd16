#pragma once

#include "carnot_ma/fields.hpp"
#include "carnot_ma/jets.hpp"

#include <functional>
#include <span>

namespace carnot_ma {

struct ConvexityReport {
    double gamma_lower = 0.0;  // min sampled lambda_min(D^2_X u); negative when violated
    Vec worst_point;
    std::size_t samples_checked = 0;
    std::size_t samples_skipped = 0;
};

using RegionPredicate = std::function<bool(const Vec&)>;

/// Sampled X-convexity: lambda_min of the finite-difference horizontal Hessian.
/// Samples whose stencil leaves `region` (or makes `u` throw DomainError) are
/// skipped and counted.
ConvexityReport check_x_convex(const ScalarField& u, const FieldFamily& family, std::span<const Vec> samples, double h,
                               const RegionPredicate& region = {});

/// Same with exact jets.
ConvexityReport check_x_convex_exact(const JetField& u, const FieldFamily& family, std::span<const Vec> samples);

struct NormConvexityReport {
    double min_lambda = 0.0;
    double max_abs_det = 0.0;
    double max_kernel_residual = 0.0;  // ||[D^2_X w - 3/(4w) D_X w (x) D_X w] D_X w||
    double max_formula_residual = 0.0; // chain-rule Hessian of w^{1/4} vs the closed form
    std::size_t samples_checked = 0;
    std::size_t samples_skipped = 0;
};

/// Convexity and degeneracy of the Koranyi norm |x|_H on H^1 at the samples,
/// with exact jets. Samples with |(x1, x2)| < axis_margin are skipped.
NormConvexityReport x_convexity_of_norm_check(std::span<const Vec> samples, double axis_margin);

/// max over samples of |D_X u| from centered differences along sigma(x) e_j.
double horizontal_gradient_sup(const ScalarField& u, const FieldFamily& family, std::span<const Vec> samples, double h);

struct GradientBoundResult {
    double C = 0.0;          // finer estimate
    double C_coarse = 0.0;
    double ratio = 1.0;      // max(C, C_coarse) / min(C, C_coarse)
    bool bound_holds = false;
};

/// Interior bound |D_X u| <= C on the inner samples, from two resolutions of
/// the same function; holds iff both values are finite and within 10%.
GradientBoundResult horizontal_gradient_bound(const ScalarField& coarse, double h_coarse, const ScalarField& fine,
                                              double h_fine, const FieldFamily& family,
                                              std::span<const Vec> inner_samples);

}  // namespace carnot_ma
