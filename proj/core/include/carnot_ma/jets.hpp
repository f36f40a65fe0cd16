#pragma once

#include "carnot_ma/linalg.hpp"

#include <functional>

namespace carnot_ma {

/// Value, Euclidean gradient and Hessian of a scalar function at a point.
struct EuclideanJet2 {
    double value = 0.0;
    Vec gradient;
    Mat hessian;

    static EuclideanJet2 zero(int n) {
        return {0.0, Vec::Zero(n), Mat::Zero(n, n)};
    }
};

/// Value, horizontal gradient D_X u in R^m and symmetrized horizontal
/// Hessian D^2_X u in S^m.
struct HorizontalJet {
    double value = 0.0;
    Vec h_gradient;
    Mat h_hessian;
};

using ScalarField = std::function<double(const Vec&)>;
using JetField = std::function<EuclideanJet2(const Vec&)>;
using HorizontalJetField = std::function<HorizontalJet(const Vec&)>;

/// A function with exact second-order jets; `value` must agree with `jet(x).value`.
struct SmoothFunction {
    ScalarField value;
    JetField jet;
};

}  // namespace carnot_ma
