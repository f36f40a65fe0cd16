#pragma once

#include "carnot_ma/linalg.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace carnot_ma {

enum class Smoothness { c11, c2 };

using MatrixField = std::function<Mat(const Vec&)>;
/// Stacked partials: element k is the entrywise derivative d/dx_k.
using MatrixJacobianField = std::function<std::vector<Mat>(const Vec&)>;

/// A family X_1..X_m of vector fields on R^n, stored through the n x m
/// coefficient matrix sigma(x) whose column j holds the coefficients of X_j.
///
/// Carnot-type families have sigma = [I_m ; tau(x)]; they are built from tau
/// and its Jacobian. General sigma is representable but reported as not of
/// Carnot type by validate_carnot_type().
class FieldFamily {
public:
    /// sigma = [I_m ; tau(x)] with tau of shape (n-m) x m.
    static FieldFamily carnot_type(int n, int m, MatrixField tau, MatrixJacobianField tau_jacobian,
                                   Smoothness smoothness = Smoothness::c2, std::string name = "custom");

    /// Carnot type with tau Jacobian by central differences (step 1e-5).
    static FieldFamily carnot_type_fd(int n, int m, MatrixField tau, Smoothness smoothness = Smoothness::c2,
                                      std::string name = "custom");

    /// Arbitrary sigma; flagged when it violates the [I; tau] shape.
    static FieldFamily general(int n, int m, MatrixField sigma, MatrixJacobianField sigma_jacobian,
                               Smoothness smoothness = Smoothness::c2, std::string name = "general");

    /// Canonical basis of R^n (m = n).
    static FieldFamily euclidean(int n);

    /// Generators of the j-th Heisenberg group on R^{2j+1}:
    /// X_i = d_i + 2 x_{i+j} d_t, X_{i+j} = d_{i+j} - 2 x_i d_t.
    static FieldFamily heisenberg(int j = 1);

    int n() const { return n_; }
    int m() const { return m_; }
    Smoothness smoothness() const { return smoothness_; }
    const std::string& name() const { return name_; }
    /// Declared [I; tau] structure (built via carnot_type / presets).
    bool declared_carnot_type() const { return carnot_; }

    /// n x m matrix [I_m ; tau(x)].
    Mat sigma(const Vec& x) const;

    /// d sigma / d x_k for k = 0..n-1, each n x m.
    std::vector<Mat> sigma_jacobian(const Vec& x) const;

    /// tau(x) for Carnot-type families; throws InputError otherwise.
    Mat tau(const Vec& x) const;
    std::vector<Mat> tau_jacobian(const Vec& x) const;

    /// Q_ij(x,p) = 1/2 (Dsigma^j sigma^i + Dsigma^i sigma^j) . p
    Mat q_matrix(const Vec& x, const Vec& p) const;

    /// The linear map p -> Q(x,p) as n symmetric m x m slices: Q(x,p) = sum_k p_k slice_k.
    std::vector<Mat> q_slices(const Vec& x) const;

    /// True when the family's Q vanishes identically in p at x.
    bool q_vanishes_at(const Vec& x, double tol = 0.0) const;

private:
    void check_point(const Vec& x) const;

    int n_ = 0;
    int m_ = 0;
    bool carnot_ = false;
    Smoothness smoothness_ = Smoothness::c2;
    std::string name_;
    MatrixField tau_;
    MatrixJacobianField tau_jacobian_;
    MatrixField sigma_;
    MatrixJacobianField sigma_jacobian_;
};

/// Builds a Carnot-type family from tau entries given as expressions in
/// x1..xn (row-major, (n-m) rows of m entries); Jacobians are exact.
FieldFamily carnot_family_from_expressions(int n, int m, const std::vector<std::vector<std::string>>& tau,
                                           Smoothness smoothness = Smoothness::c2);

/// Result of structural and Jacobian checks on a family.
struct CarnotValidationReport {
    bool valid = false;
    bool identity_block = false;      // top m x m block of sigma equals I at all samples
    double max_jacobian_residual = 0.0;
    Vec worst_point;
    std::size_t samples_checked = 0;
    std::string message;
};

/// Confirms the [I; tau] block shape at every sample and compares the declared tau
/// Jacobian against central differences (step 1e-5).
CarnotValidationReport validate_carnot_type(const FieldFamily& family, std::span<const Vec> samples,
                                            double jacobian_tol = 1e-6);

/// Largest eta with sigma^T sigma + Q(x,x) >= eta I on the samples (uniform
/// X-convexity of |x|^2). eta > 0 is the alternative hypothesis to Carnot type.
double xsquare_margin(const FieldFamily& family, std::span<const Vec> samples);

}  // namespace carnot_ma
