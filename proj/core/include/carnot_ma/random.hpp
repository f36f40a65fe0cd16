#pragma once

#include "carnot_ma/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace carnot_ma {

/// Seeded generator with platform-independent uniform and normal draws
/// (the standard distributions are implementation defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Vec normal_vector(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = normal();
        return v;
    }

    Vec unit_vector(int n) {
        Vec v = normal_vector(n);
        while (v.norm() == 0.0) v = normal_vector(n);
        return v / v.norm();
    }

    /// Point uniformly distributed in the Euclidean ball of radius r.
    Vec in_ball(int n, double r) {
        return unit_vector(n) * (r * std::pow(uniform(), 1.0 / static_cast<double>(n)));
    }

    /// Haar-ish orthogonal matrix from the QR factorization of a Gaussian matrix.
    Mat orthogonal(int n) {
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = normal();
        Eigen::HouseholderQR<Mat> qr(g);
        Mat q = qr.householderQ();
        const Mat r = qr.matrixQR();
        for (int i = 0; i < n; ++i) {
            if (r(i, i) < 0) q.col(i) = -q.col(i);
        }
        return q;
    }

    /// Symmetric matrix with eigenvalues drawn uniformly in [lo, hi].
    Mat symmetric_with_spectrum(int n, double lo, double hi) {
        const Mat q = orthogonal(n);
        Vec d(n);
        for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
        return symmetrize(q * d.asDiagonal() * q.transpose());
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace carnot_ma
