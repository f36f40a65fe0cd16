#include "carnot_ma/linalg.hpp"

#include "carnot_ma/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carnot_ma {

void eigenvalues_sym2(double a00, double a01, double a11, double out[2]) {
    const double mean = 0.5 * (a00 + a11);
    const double radius = std::hypot(0.5 * (a00 - a11), a01);
    out[0] = mean - radius;
    out[1] = mean + radius;
}

void eigenvalues_sym3(const double a[3][3], double out[3]) {
    const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (p1 == 0.0) {
        out[0] = a[0][0];
        out[1] = a[1][1];
        out[2] = a[2][2];
        std::sort(out, out + 3);
        return;
    }
    const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    const double b00 = a[0][0] - q;
    const double b11 = a[1][1] - q;
    const double b22 = a[2][2] - q;
    const double p = std::sqrt((b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1) / 6.0);
    const double det_b = b00 * (b11 * b22 - a[1][2] * a[1][2])
                         - a[0][1] * (a[0][1] * b22 - a[1][2] * a[0][2])
                         + a[0][2] * (a[0][1] * a[1][2] - b11 * a[0][2]);
    const double r = std::clamp(det_b / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double largest = q + 2.0 * p * std::cos(phi);
    const double smallest = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    out[0] = smallest;
    out[1] = 3.0 * q - largest - smallest;
    out[2] = largest;
    std::sort(out, out + 3);
}

Vec symmetric_eigenvalues(const Mat& a) {
    if (a.rows() != a.cols()) {
        throw InputError("symmetric_eigenvalues: matrix is not square");
    }
    const auto n = a.rows();
    Vec out(n);
    switch (n) {
        case 0:
            return out;
        case 1:
            out(0) = a(0, 0);
            return out;
        case 2: {
            double ev[2];
            eigenvalues_sym2(a(0, 0), 0.5 * (a(0, 1) + a(1, 0)), a(1, 1), ev);
            out << ev[0], ev[1];
            return out;
        }
        case 3: {
            double m[3][3];
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    m[i][j] = 0.5 * (a(i, j) + a(j, i));
                }
            }
            double ev[3];
            eigenvalues_sym3(m, ev);
            out << ev[0], ev[1], ev[2];
            return out;
        }
        default: {
            Eigen::SelfAdjointEigenSolver<Mat> solver(symmetrize(a), Eigen::EigenvaluesOnly);
            return solver.eigenvalues();
        }
    }
}

double lambda_min(const Mat& a) { return symmetric_eigenvalues(a)(0); }

double lambda_max(const Mat& a) {
    const Vec ev = symmetric_eigenvalues(a);
    return ev(ev.size() - 1);
}

double det_plus(const Mat& a) {
    const Vec ev = symmetric_eigenvalues(a);
    double prod = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        prod *= std::max(ev(i), 0.0);
    }
    return prod;
}

double det_root_plus(const Mat& a) {
    if (a.rows() == 0) {
        return 1.0;
    }
    return std::pow(det_plus(a), 1.0 / static_cast<double>(a.rows()));
}

Mat symmetrize(const Mat& a) { return 0.5 * (a + a.transpose()); }

double asymmetry(const Mat& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace carnot_ma
