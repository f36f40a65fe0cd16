#include "carnot_ma/operators.hpp"

#include "carnot_ma/error.hpp"
#include "carnot_ma/linalg.hpp"
#include "carnot_ma/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carnot_ma {

std::string to_string(OperatorForm form) {
    switch (form) {
        case OperatorForm::det: return "det";
        case OperatorForm::root: return "root";
        case OperatorForm::logdet: return "logdet";
        case OperatorForm::maxform: return "maxform";
    }
    return "unknown";
}

double ma_residual(OperatorForm form, const Vec& x, double r, const HorizontalJet& jet, const Hamiltonian& h) {
    const Mat& a = jet.h_hessian;
    const int m = static_cast<int>(a.rows());
    if (a.cols() != m || jet.h_gradient.size() != m) throw InputError("ma_residual: jet dimension mismatch");
    const double inv_m = 1.0 / static_cast<double>(m);
    switch (form) {
        case OperatorForm::det:
            return -a.determinant() + h(x, r, jet.h_gradient);
        case OperatorForm::root: {
            const Vec ev = symmetric_eigenvalues(a);
            const double det_root = ev(0) >= 0.0 ? std::pow(std::max(a.determinant(), 0.0), inv_m) : 0.0;
            return -det_root + h.root(x, r, jet.h_gradient, m);
        }
        case OperatorForm::maxform: {
            const Vec ev = symmetric_eigenvalues(a);
            double prod = 1.0;
            for (int i = 0; i < m; ++i) prod *= std::max(ev(i), 0.0);
            return std::max(-ev(0), -std::pow(prod, inv_m) + h.root(x, r, jet.h_gradient, m));
        }
        case OperatorForm::logdet: {
            if (lambda_min(a) <= 0.0) throw DomainError("ma_residual(logdet): horizontal Hessian is not positive definite");
            const double hv = h(x, r, jet.h_gradient);
            if (!(hv > 0.0)) throw DomainError("ma_residual(logdet): H must be positive");
            Eigen::LDLT<Mat> ldlt(a);
            const Vec d = ldlt.vectorD();
            double logdet = 0.0;
            for (int i = 0; i < m; ++i) logdet += std::log(d(i));
            return -logdet + std::log(hv);
        }
    }
    return 0.0;
}

double gauss_curvature(const HorizontalJet& jet) {
    const int m = static_cast<int>(jet.h_hessian.rows());
    return jet.h_hessian.determinant() * std::pow(1.0 + jet.h_gradient.squaredNorm(), -0.5 * (m + 2));
}

namespace {

double psd_tolerance(const Mat& a) {
    return 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

double detroot_objective(const Mat& a, const Mat& b) {
    const int n = static_cast<int>(a.rows());
    const double det_b = b.determinant();
    if (!(det_b > 0.0)) throw InputError("detroot_objective: candidate must be positive definite");
    // Rescale onto det B = N^{-N}.
    const double scale = 1.0 / (static_cast<double>(n) * std::pow(det_b, 1.0 / n));
    return scale * (a * b).trace();
}

DetRootRepresentation detroot_min_representation(const Mat& a, std::span<const Mat> candidates) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n || n == 0) throw InputError("detroot_min_representation: A must be square and nonempty");
    const Mat as = symmetrize(a);
    Eigen::SelfAdjointEigenSolver<Mat> es(as);
    const Vec ev = es.eigenvalues();
    const Mat& basis = es.eigenvectors();
    if (ev(0) < -psd_tolerance(as)) throw DomainError("detroot_min_representation: A is not positive semidefinite");

    const double dn = static_cast<double>(n);
    auto analytic = [&](double delta) {
        // Minimizer for A + delta I expressed in the eigenbasis of A; tr(A B) evaluated exactly.
        double log_det = 0.0;
        for (int i = 0; i < n; ++i) log_det += std::log(std::max(ev(i), 0.0) + delta);
        const double c = std::exp(log_det / dn) / dn;
        Vec d(n);
        double tr = 0.0;
        for (int i = 0; i < n; ++i) {
            d(i) = c / (std::max(ev(i), 0.0) + delta);
            tr += std::max(ev(i), 0.0) * d(i);
        }
        return std::pair{tr, Mat(basis * d.asDiagonal() * basis.transpose())};
    };

    DetRootRepresentation best{std::numeric_limits<double>::infinity(), Mat()};
    if (ev(0) > 0.0) {
        auto [v, b] = analytic(0.0);
        best = {v, b};
    } else {
        const double scale = std::max(1.0, ev(n - 1));
        for (int k = 0; k <= 30; ++k) {
            auto [v, b] = analytic(scale * std::pow(10.0, -k));
            if (v < best.value) best = {v, b};
        }
    }
    for (const Mat& b : candidates) {
        const double v = detroot_objective(as, b);
        if (v < best.value) {
            const double det_b = b.determinant();
            best = {v, b / (dn * std::pow(det_b, 1.0 / dn))};
        }
    }
    return best;
}

double logdet_objective(const Mat& a, double scale, const Mat& m) {
    const double n = static_cast<double>(a.rows());
    return n * std::log(scale) - n + (a * m).trace();
}

LogDetRepresentation logdet_min_representation(const Mat& a, double gamma) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n || n == 0) throw InputError("logdet_min_representation: A must be square and nonempty");
    if (!(gamma > 0.0)) throw InputError("logdet_min_representation: gamma must be positive");
    const Mat as = symmetrize(a);
    if (lambda_min(as) < gamma) throw DomainError("logdet_min_representation: lambda_min(A) < gamma");
    Eigen::LLT<Mat> llt(as);
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
    LogDetRepresentation out;
    out.a = std::exp(log_det / n);
    out.m = symmetrize(llt.solve(Mat::Identity(n, n)));
    out.value = logdet_objective(as, out.a, out.m);
    return out;
}

bool InequalityReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.violations == 0; });
}

double minkowski_slack(const Mat& a, const Mat& b) {
    const double inv = 1.0 / static_cast<double>(a.rows());
    return std::pow((a + b).determinant(), inv) - std::pow(a.determinant(), inv) -
           std::pow(std::max(b.determinant(), 0.0), inv);
}

double nonsingular_rank_one_defect(const Vec& q) {
    const int n = static_cast<int>(q.size());
    const Mat m = Mat::Identity(n, n) + q * q.transpose();
    return m.determinant() - (1.0 + q.squaredNorm());
}

double conjugated_rank_one_defect(const Mat& k, double mu, const Vec& v) {
    const int n = static_cast<int>(v.size());
    const Mat lhs = k.transpose() * (Mat::Identity(n, n) + mu * v * v.transpose()) * k;
    return lhs.determinant() - (k.transpose() * k).determinant() * (1.0 + mu * v.squaredNorm());
}

double rank_one_lower_bound_slack(const Mat& a, double eta, double mu, const Vec& q) {
    const double n = static_cast<double>(q.size());
    return (a + mu * q * q.transpose()).determinant() - std::pow(eta, n) * (1.0 + mu * q.squaredNorm() / (n * eta));
}

InequalityReport matrix_inequality_suite(std::size_t trials, std::uint64_t seed, double tol) {
    if (trials == 0) throw InputError("matrix_inequality_suite: trials must be >= 1");
    Rng rng(seed);
    InequalityCheck mink{"minkowski_det_root", 0, 0, std::numeric_limits<double>::infinity()};
    InequalityCheck noda{"det_identity_plus_rank_one", 0, 0, std::numeric_limits<double>::infinity()};
    InequalityCheck luigi{"det_conjugated_rank_one", 0, 0, std::numeric_limits<double>::infinity()};
    InequalityCheck pll{"det_rank_one_lower_bound", 0, 0, std::numeric_limits<double>::infinity()};

    auto record = [tol](InequalityCheck& c, double slack, double scale) {
        ++c.trials;
        const double rel = slack / std::max(1.0, scale);
        c.worst_margin = std::min(c.worst_margin, rel);
        if (rel < -tol) ++c.violations;
    };

    for (std::size_t t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
        {
            const Mat a = rng.symmetric_with_spectrum(n, 0.05, 5.0);
            Mat b = rng.symmetric_with_spectrum(n, 0.0, 5.0);
            const double inv = 1.0 / n;
            const double scale = std::pow((a + b).determinant(), inv);
            record(mink, minkowski_slack(a, b), scale);
        }
        {
            const Vec q = rng.normal_vector(n) * rng.uniform(0.0, 3.0);
            const double d = nonsingular_rank_one_defect(q);
            record(noda, -std::abs(d), 1.0 + q.squaredNorm());
        }
        {
            Mat k(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) k(i, j) = rng.normal();
            const double mu = rng.uniform(0.0, 5.0);
            const Vec v = rng.normal_vector(n);
            const double scale = std::abs((k.transpose() * k).determinant()) * (1.0 + mu * v.squaredNorm());
            record(luigi, -std::abs(conjugated_rank_one_defect(k, mu, v)), scale);
        }
        {
            const double eta = rng.uniform(0.1, 3.0);
            const Mat a = rng.symmetric_with_spectrum(n, eta, eta + 4.0);
            const double mu = rng.uniform(0.0, 5.0);
            const Vec q = rng.normal_vector(n);
            const double scale = (a + mu * q * q.transpose()).determinant();
            record(pll, rank_one_lower_bound_slack(a, eta, mu, q), scale);
        }
    }
    return {{mink, noda, luigi, pll}};
}

std::vector<double> default_growth_radii(int doublings) {
    std::vector<double> r{0.0};
    double v = 1.0;
    for (int k = 0; k <= doublings; ++k, v *= 2.0) r.push_back(v);
    return r;
}

GrowthCheckResult growth_check(const Hamiltonian& h, int m, double r_value, std::span<const Vec> x_samples,
                               std::span<const double> radii, std::uint64_t seed) {
    if (x_samples.empty()) throw InputError("growth_check: no x samples");
    Rng rng(seed);
    std::vector<Vec> dirs;
    for (int i = 0; i < m; ++i) dirs.push_back(Vec::Unit(m, i));
    for (int i = 0; i < 16; ++i) dirs.push_back(rng.unit_vector(m));

    GrowthCheckResult out;
    for (double rho : radii) {
        double sup = 0.0;
        for (const Vec& x : x_samples) {
            for (const Vec& d : dirs) {
                sup = std::max(sup, h.root(x, r_value, d * rho, m));
            }
        }
        out.radii.push_back(rho);
        out.sup_root.push_back(sup);
    }
    // M from the smallest radius, L as the largest sampled slope above M.
    const auto first = std::min_element(out.radii.begin(), out.radii.end()) - out.radii.begin();
    out.M = out.sup_root[static_cast<std::size_t>(first)];
    std::vector<double> ratios;
    for (std::size_t i = 0; i < out.radii.size(); ++i) {
        if (out.radii[i] <= 0.0) continue;
        const double ratio = std::max(0.0, out.sup_root[i] - out.M) / out.radii[i];
        ratios.push_back(ratio);
        out.L = std::max(out.L, ratio);
    }
    bool finite = std::isfinite(out.L) && std::isfinite(out.M);
    bool stable = ratios.size() >= 4;
    if (stable) {
        // Superlinear growth makes the tail ratio keep increasing geometrically.
        for (std::size_t i = ratios.size() - 3; i < ratios.size(); ++i) {
            if (ratios[i] > 1.01 * ratios[i - 1] + 1e-12) stable = false;
        }
    }
    out.passes = finite && stable;
    return out;
}

LipschitzCheckResult lipschitz_root_check(const Hamiltonian& h, int m, double bound, std::span<const Vec> x_samples,
                                          std::size_t trials, std::uint64_t seed, double q_exclusion) {
    if (x_samples.empty()) throw InputError("lipschitz_root_check: no x samples");
    Rng rng(seed);
    LipschitzCheckResult out;
    for (std::size_t t = 0; t < trials; ++t) {
        const Vec& x = x_samples[t % x_samples.size()];
        const double r = rng.uniform(-bound, bound);
        const Vec q = rng.in_ball(m, bound);
        const double step = std::pow(10.0, rng.uniform(-6.0, 0.0));
        const Vec q1 = rng.unit_vector(m) * step;
        if (q.norm() < q_exclusion || (q + q1).norm() < q_exclusion) continue;
        const double d = std::abs(h.root(x, r, q + q1, m) - h.root(x, r, q, m)) / q1.norm();
        out.L = std::max(out.L, d);
        ++out.samples;
    }
    out.passes = std::isfinite(out.L);
    return out;
}

HamiltonianInvariantReport check_hamiltonian(const Hamiltonian& h, int m, std::span<const Vec> x_samples,
                                             double r_bound, double q_bound, std::size_t trials, std::uint64_t seed) {
    Rng rng(seed);
    HamiltonianInvariantReport rep;
    if (x_samples.empty()) return rep;
    for (std::size_t t = 0; t < trials; ++t) {
        const Vec& x = x_samples[t % x_samples.size()];
        double r0 = rng.uniform(-r_bound, r_bound);
        double r1 = rng.uniform(-r_bound, r_bound);
        if (r1 < r0) std::swap(r0, r1);
        const Vec q = rng.in_ball(m, q_bound);
        const double h0 = h(x, r0, q);
        const double h1 = h(x, r1, q);
        ++rep.samples;
        if (h0 < 0.0 || h1 < 0.0) ++rep.negative_values;
        if (h.monotone_in_r() && h1 < h0) ++rep.monotonicity_violations;
    }
    return rep;
}

}  // namespace carnot_ma
