#include "carnot_ma/calculus.hpp"

#include "carnot_ma/error.hpp"

#include <cmath>

namespace carnot_ma {

namespace {

void check_step(double h) {
    if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
}

}  // namespace

HorizontalJet horizontal_jet_exact(const FieldFamily& family, const Vec& x, const EuclideanJet2& jet) {
    const int n = family.n();
    if (x.size() != n || jet.gradient.size() != n || jet.hessian.rows() != n || jet.hessian.cols() != n) {
        throw InputError("horizontal_jet_exact: dimension mismatch");
    }
    const Mat s = family.sigma(x);
    HorizontalJet out;
    out.value = jet.value;
    out.h_gradient = s.transpose() * jet.gradient;
    out.h_hessian = symmetrize(s.transpose() * jet.hessian * s + family.q_matrix(x, jet.gradient));
    return out;
}

Vec centered_gradient(const ScalarField& u, const Vec& x, double h) {
    check_step(h);
    Vec g(x.size());
    Vec xp = x;
    Vec xm = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        xp(k) = x(k) + h;
        xm(k) = x(k) - h;
        g(k) = (u(xp) - u(xm)) / (2.0 * h);
        xp(k) = x(k);
        xm(k) = x(k);
    }
    return g;
}

double directional_second_difference(const ScalarField& u, const FieldFamily& family, const Vec& x, const Vec& v,
                                     double h) {
    check_step(h);
    if (v.size() != family.m()) throw InputError("directional_second_difference: direction must lie in R^m");
    const Vec arm = h * (family.sigma(x) * v);
    double d = (u(x + arm) - 2.0 * u(x) + u(x - arm)) / (h * h);
    const auto slices = family.q_slices(x);
    bool any_q = false;
    for (const auto& sl : slices) any_q = any_q || (sl.size() > 0 && sl.cwiseAbs().maxCoeff() != 0.0);
    if (any_q) {
        const Vec grad = centered_gradient(u, x, h);
        d += v.dot(family.q_matrix(x, grad) * v);
    }
    return d;
}

HorizontalJet horizontal_jet_fd(const ScalarField& u, const FieldFamily& family, const Vec& x, double h) {
    return horizontal_jet_fd(u, family, x, h, Mat::Identity(family.m(), family.m()));
}

HorizontalJet horizontal_jet_fd(const ScalarField& u, const FieldFamily& family, const Vec& x, double h,
                                const Mat& frame) {
    check_step(h);
    const int m = family.m();
    if (frame.rows() != m || frame.cols() != m) throw InputError("horizontal_jet_fd: frame must be m x m");
    const Mat s = family.sigma(x);
    HorizontalJet jet;
    jet.value = u(x);

    Vec g(m);
    Mat a(m, m);
    for (int j = 0; j < m; ++j) {
        const Vec arm = h * (s * frame.col(j));
        g(j) = (u(x + arm) - u(x - arm)) / (2.0 * h);
        a(j, j) = directional_second_difference(u, family, x, frame.col(j), h);
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const Vec plus = (frame.col(i) + frame.col(j)) * inv_sqrt2;
            const Vec minus = (frame.col(i) - frame.col(j)) * inv_sqrt2;
            const double dp = directional_second_difference(u, family, x, plus, h);
            const double dm = directional_second_difference(u, family, x, minus, h);
            a(i, j) = 0.5 * (dp - dm);
            a(j, i) = a(i, j);
        }
    }
    jet.h_gradient = frame * g;
    jet.h_hessian = symmetrize(frame * a * frame.transpose());
    return jet;
}

double mixed_second_difference(const ScalarField& u, const FieldFamily& family, const Vec& x, int i, int j,
                               double h) {
    check_step(h);
    const Mat s = family.sigma(x);
    const Vec si = h * s.col(i);
    const Vec sj = h * s.col(j);
    double d = (u(x + si + sj) - u(x + si - sj) - u(x - si + sj) + u(x - si - sj)) / (4.0 * h * h);
    if (!family.q_vanishes_at(x)) {
        d += family.q_matrix(x, centered_gradient(u, x, h))(i, j);
    }
    return d;
}

}  // namespace carnot_ma
