#include "carnot_ma/convexity.hpp"

#include "carnot_ma/calculus.hpp"
#include "carnot_ma/constructions.hpp"
#include "carnot_ma/error.hpp"

#include <cmath>
#include <limits>

namespace carnot_ma {

namespace {

void record(ConvexityReport& report, double lam, const Vec& x) {
    if (report.samples_checked == 0 || lam < report.gamma_lower) {
        report.gamma_lower = lam;
        report.worst_point = x;
    }
    ++report.samples_checked;
}

}  // namespace

ConvexityReport check_x_convex(const ScalarField& u, const FieldFamily& family, std::span<const Vec> samples, double h,
                               const RegionPredicate& region) {
    if (!(h > 0.0)) throw InputError("check_x_convex: h must be positive");
    ScalarField guarded = u;
    if (region) {
        guarded = [&u, &region](const Vec& y) {
            if (!region(y)) throw DomainError("stencil point outside region");
            return u(y);
        };
    }
    ConvexityReport report;
    for (const Vec& x : samples) {
        try {
            const HorizontalJet jet = horizontal_jet_fd(guarded, family, x, h);
            record(report, lambda_min(jet.h_hessian), x);
        } catch (const DomainError&) {
            ++report.samples_skipped;
        }
    }
    return report;
}

ConvexityReport check_x_convex_exact(const JetField& u, const FieldFamily& family, std::span<const Vec> samples) {
    ConvexityReport report;
    for (const Vec& x : samples) {
        const HorizontalJet jet = horizontal_jet_exact(family, x, u(x));
        record(report, lambda_min(jet.h_hessian), x);
    }
    return report;
}

NormConvexityReport x_convexity_of_norm_check(std::span<const Vec> samples, double axis_margin) {
    const FieldFamily heis = FieldFamily::heisenberg(1);
    const SmoothFunction w = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic);
    const SmoothFunction norm = explicit_heisenberg_oracle(HeisenbergOracle::koranyi_norm);
    NormConvexityReport report;
    report.min_lambda = std::numeric_limits<double>::infinity();
    for (const Vec& x : samples) {
        if (std::hypot(x(0), x(1)) < axis_margin) {
            ++report.samples_skipped;
            continue;
        }
        const HorizontalJet jw = horizontal_jet_exact(heis, x, w.jet(x));
        const HorizontalJet jn = horizontal_jet_exact(heis, x, norm.jet(x));
        const double wv = jw.value;
        const Mat bracket = jw.h_hessian - (3.0 / (4.0 * wv)) * jw.h_gradient * jw.h_gradient.transpose();
        const Mat closed = bracket / (4.0 * std::pow(wv, 0.75));
        report.max_formula_residual =
            std::max(report.max_formula_residual, (closed - jn.h_hessian).cwiseAbs().maxCoeff());
        report.max_kernel_residual = std::max(report.max_kernel_residual, (bracket * jw.h_gradient).norm());
        report.min_lambda = std::min(report.min_lambda, lambda_min(jn.h_hessian));
        report.max_abs_det = std::max(report.max_abs_det, std::abs(jn.h_hessian.determinant()));
        ++report.samples_checked;
    }
    if (report.samples_checked == 0) report.min_lambda = 0.0;
    return report;
}

double horizontal_gradient_sup(const ScalarField& u, const FieldFamily& family, std::span<const Vec> samples,
                               double h) {
    if (!(h > 0.0)) throw InputError("horizontal_gradient_sup: h must be positive");
    double c = 0.0;
    for (const Vec& x : samples) {
        const Mat s = family.sigma(x);
        Vec g(family.m());
        for (int j = 0; j < family.m(); ++j) {
            g(j) = (u(x + h * s.col(j)) - u(x - h * s.col(j))) / (2.0 * h);
        }
        c = std::max(c, g.norm());
    }
    return c;
}

GradientBoundResult horizontal_gradient_bound(const ScalarField& coarse, double h_coarse, const ScalarField& fine,
                                              double h_fine, const FieldFamily& family,
                                              std::span<const Vec> inner_samples) {
    GradientBoundResult r;
    r.C_coarse = horizontal_gradient_sup(coarse, family, inner_samples, h_coarse);
    r.C = horizontal_gradient_sup(fine, family, inner_samples, h_fine);
    const double hi = std::max(r.C, r.C_coarse);
    const double lo = std::min(r.C, r.C_coarse);
    if (hi == 0.0) {
        r.ratio = 1.0;
    } else if (lo == 0.0) {
        r.ratio = std::numeric_limits<double>::infinity();
    } else {
        r.ratio = hi / lo;
    }
    r.bound_holds = std::isfinite(r.C) && std::isfinite(r.C_coarse) && r.ratio <= 1.1;
    return r;
}

}  // namespace carnot_ma
