#pragma once

#include "carnot_ma/hamiltonian.hpp"
#include "carnot_ma/jets.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace carnot_ma {

/// Equivalent ways of writing -det D^2_X u + H = 0.
enum class OperatorForm {
    det,      ///< -det(A) + H
    root,     ///< -det(A)^{1/m} [A >= 0] + H^{1/m}
    logdet,   ///< -log det(A) + log H, A > 0 and H > 0
    maxform,  ///< max(-lambda_min(A), -det_+(A)^{1/m} + H^{1/m})
};

std::string to_string(OperatorForm form);

/// Residual of the chosen form at jet (value ignored, r supplied separately).
double ma_residual(OperatorForm form, const Vec& x, double r, const HorizontalJet& jet, const Hamiltonian& h);

/// Horizontal Gauss curvature det(D^2_X u) (1 + |D_X u|^2)^{-(m+2)/2}.
double gauss_curvature(const HorizontalJet& jet);

struct DetRootRepresentation {
    double value = 0.0;
    Mat minimizer;
};

/// (det A)^{1/N} = min { tr(AB) : B >= 0, det B = N^{-N} }. The minimum is
/// taken over `candidates` (each rescaled onto det B = N^{-N}) together with the
/// analytic minimizer (det A)^{1/N} A^{-1} / N; for singular A the latter is
/// replaced by the minimizers of A + delta I along delta -> 0.
/// Throws DomainError when A is not PSD.
DetRootRepresentation detroot_min_representation(const Mat& a, std::span<const Mat> candidates = {});

/// tr(AB) for B rescaled to det B = N^{-N}.
double detroot_objective(const Mat& a, const Mat& b);

struct LogDetRepresentation {
    double value = 0.0;
    double a = 0.0;
    Mat m;
};

/// log det A = min { N log a - N + tr(AM) : 0 <= M <= I/gamma, det M = a^{-N} },
/// attained at a = (det A)^{1/N}, M = A^{-1}. Throws DomainError if lambda_min(A) < gamma.
LogDetRepresentation logdet_min_representation(const Mat& a, double gamma);

double logdet_objective(const Mat& a, double scale, const Mat& m);

struct InequalityCheck {
    std::string name;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // most negative slack (identities: max relative defect, reported as negative)
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;
    bool all_hold() const;
};

/// Randomized checks of the Minkowski determinant inequality, det(I + q q^T) = 1 + |q|^2,
/// det(K^T(I + mu v v^T)K) = det(K^T K)(1 + mu|v|^2) and
/// det(A + mu q q^T) >= eta^N (1 + mu |q|^2 / (N eta)). Relative tolerance `tol`.
InequalityReport matrix_inequality_suite(std::size_t trials, std::uint64_t seed, double tol = 1e-10);

/// Slack of each inequality for given inputs (>= 0 when it holds).
double minkowski_slack(const Mat& a, const Mat& b);
double nonsingular_rank_one_defect(const Vec& q);
double conjugated_rank_one_defect(const Mat& k, double mu, const Vec& v);
double rank_one_lower_bound_slack(const Mat& a, double eta, double mu, const Vec& q);

struct GrowthCheckResult {
    bool passes = false;
    double L = 0.0;
    double M = 0.0;
    std::vector<double> radii;
    std::vector<double> sup_root;  // sup_x H^{1/m}(x, R, q) over |q| = radius
};

/// Fits sup_x H^{1/m}(x, R, q) against |q| on `radii` (must include large values).
/// Passes iff the ratio (sup - M)/|q| stops growing on the tail of the schedule.
GrowthCheckResult growth_check(const Hamiltonian& h, int m, double r_value, std::span<const Vec> x_samples,
                               std::span<const double> radii, std::uint64_t seed = 1);

/// Geometric radius schedule 0, 1, 2, 4, ..., 2^k.
std::vector<double> default_growth_radii(int doublings = 24);

struct LipschitzCheckResult {
    bool passes = false;
    double L = 0.0;
    std::size_t samples = 0;
};

/// Empirical Lipschitz constant of q -> H^{1/m}(x, r, q) on |r| <= R, |q| <= R, |q_1| <= 1.
/// Points with |q| or |q + q_1| below `q_exclusion` are skipped.
LipschitzCheckResult lipschitz_root_check(const Hamiltonian& h, int m, double bound, std::span<const Vec> x_samples,
                                          std::size_t trials, std::uint64_t seed, double q_exclusion = 0.0);

struct HamiltonianInvariantReport {
    std::size_t negative_values = 0;
    std::size_t monotonicity_violations = 0;
    std::size_t samples = 0;
};

/// Sampled H >= 0 and nondecreasing in r.
HamiltonianInvariantReport check_hamiltonian(const Hamiltonian& h, int m, std::span<const Vec> x_samples,
                                             double r_bound, double q_bound, std::size_t trials, std::uint64_t seed);

}  // namespace carnot_ma
