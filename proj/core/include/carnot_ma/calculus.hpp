#pragma once

#include "carnot_ma/fields.hpp"
#include "carnot_ma/jets.hpp"

namespace carnot_ma {

/// D_X u = sigma^T Du and D^2_X u = sigma^T D^2u sigma + Q(x, Du) from a
/// Euclidean jet.
HorizontalJet horizontal_jet_exact(const FieldFamily& family, const Vec& x, const EuclideanJet2& jet);

/// Centered Euclidean difference gradient with step h along each axis.
Vec centered_gradient(const ScalarField& u, const Vec& x, double h);

/// Chord second difference along sigma(x) v plus the first-order correction
///   [u(x + h sigma v) - 2 u(x) + u(x - h sigma v)] / h^2 + v^T Q(x, grad_h u) v.
/// Evaluation failures of `u` propagate (DomainError for points outside its domain).
double directional_second_difference(const ScalarField& u, const FieldFamily& family, const Vec& x, const Vec& v,
                                     double h);

/// Finite-difference horizontal jet. The gradient uses centered differences
/// along sigma(x) e_j; the Hessian is assembled by polarization from second
/// differences along e_j and (e_i +- e_j)/sqrt(2).
HorizontalJet horizontal_jet_fd(const ScalarField& u, const FieldFamily& family, const Vec& x, double h);

/// Same, with the frame given by the orthonormal columns of `frame` (m x m);
/// the result is rotated back to the standard basis.
HorizontalJet horizontal_jet_fd(const ScalarField& u, const FieldFamily& family, const Vec& x, double h,
                                const Mat& frame);

/// Off-diagonal Hessian entry from direct mixed chord differences
/// [u(x+h s_i+h s_j) - u(x+h s_i-h s_j) - u(x-h s_i+h s_j) + u(x-h s_i-h s_j)] / (4h^2),
/// with s_i = sigma(x) e_i, plus the Q correction.
double mixed_second_difference(const ScalarField& u, const FieldFamily& family, const Vec& x, int i, int j,
                               double h);

}  // namespace carnot_ma
