#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace carnot_ma {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigenvalues of a symmetric matrix in ascending order. Orders 1..3 use
/// closed-form characteristic roots; larger orders fall back to Householder
/// tridiagonalization followed by implicit QR.
Vec symmetric_eigenvalues(const Mat& a);

/// Closed-form roots for small symmetric matrices, ascending.
void eigenvalues_sym2(double a00, double a01, double a11, double out[2]);
void eigenvalues_sym3(const double a[3][3], double out[3]);

double lambda_min(const Mat& a);
double lambda_max(const Mat& a);

/// Product of the eigenvalues clamped at zero: det restricted to the PSD cone.
double det_plus(const Mat& a);

/// det(A)^{1/N} for A >= 0, zero when some eigenvalue is nonpositive.
double det_root_plus(const Mat& a);

Mat symmetrize(const Mat& a);

/// Max absolute entry of A - A^T.
double asymmetry(const Mat& a);

inline Vec to_vec(std::span<const double> v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Vec& v) {
    return {v.data(), v.data() + v.size()};
}

}  // namespace carnot_ma
