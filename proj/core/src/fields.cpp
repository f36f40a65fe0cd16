#include "carnot_ma/fields.hpp"

#include "carnot_ma/error.hpp"
#include "carnot_ma/expression.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace carnot_ma {

namespace {

constexpr double kFdJacobianStep = 1e-5;

std::vector<Mat> central_difference_jacobian(const MatrixField& f, const Vec& x) {
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(x.size()));
    Vec xp = x;
    Vec xm = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        xp(k) = x(k) + kFdJacobianStep;
        xm(k) = x(k) - kFdJacobianStep;
        out.push_back((f(xp) - f(xm)) / (2.0 * kFdJacobianStep));
        xp(k) = x(k);
        xm(k) = x(k);
    }
    return out;
}

}  // namespace

FieldFamily FieldFamily::carnot_type(int n, int m, MatrixField tau, MatrixJacobianField tau_jacobian,
                                     Smoothness smoothness, std::string name) {
    if (m < 1 || m > n) {
        throw InputError("FieldFamily: need 1 <= m <= n");
    }
    FieldFamily f;
    f.n_ = n;
    f.m_ = m;
    f.carnot_ = true;
    f.smoothness_ = smoothness;
    f.name_ = std::move(name);
    f.tau_ = std::move(tau);
    f.tau_jacobian_ = std::move(tau_jacobian);
    return f;
}

FieldFamily FieldFamily::carnot_type_fd(int n, int m, MatrixField tau, Smoothness smoothness, std::string name) {
    auto jac = [tau](const Vec& x) { return central_difference_jacobian(tau, x); };
    return carnot_type(n, m, tau, jac, smoothness, std::move(name));
}

FieldFamily FieldFamily::general(int n, int m, MatrixField sigma, MatrixJacobianField sigma_jacobian,
                                 Smoothness smoothness, std::string name) {
    if (m < 1 || m > n) {
        throw InputError("FieldFamily: need 1 <= m <= n");
    }
    FieldFamily f;
    f.n_ = n;
    f.m_ = m;
    f.carnot_ = false;
    f.smoothness_ = smoothness;
    f.name_ = std::move(name);
    f.sigma_ = std::move(sigma);
    f.sigma_jacobian_ = std::move(sigma_jacobian);
    return f;
}

FieldFamily FieldFamily::euclidean(int n) {
    auto tau = [n](const Vec&) { return Mat(0, n); };
    auto jac = [n](const Vec&) { return std::vector<Mat>(static_cast<std::size_t>(n), Mat(0, n)); };
    return carnot_type(n, n, tau, jac, Smoothness::c2, "euclidean" + std::to_string(n));
}

FieldFamily FieldFamily::heisenberg(int j) {
    if (j < 1) throw InputError("heisenberg: j must be >= 1");
    const int n = 2 * j + 1;
    const int m = 2 * j;
    auto tau = [j, m](const Vec& x) {
        Mat t(1, m);
        for (int i = 0; i < j; ++i) {
            t(0, i) = 2.0 * x(i + j);
            t(0, i + j) = -2.0 * x(i);
        }
        return t;
    };
    auto jac = [j, n, m](const Vec&) {
        std::vector<Mat> d(static_cast<std::size_t>(n), Mat::Zero(1, m));
        for (int i = 0; i < j; ++i) {
            d[static_cast<std::size_t>(i + j)](0, i) = 2.0;
            d[static_cast<std::size_t>(i)](0, i + j) = -2.0;
        }
        return d;
    };
    return carnot_type(n, m, tau, jac, Smoothness::c2, "heisenberg" + std::to_string(j));
}

void FieldFamily::check_point(const Vec& x) const {
    if (x.size() != n_) {
        throw InputError("FieldFamily '" + name_ + "': point of dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(n_));
    }
}

Mat FieldFamily::sigma(const Vec& x) const {
    check_point(x);
    if (!carnot_) {
        Mat s = sigma_(x);
        if (s.rows() != n_ || s.cols() != m_) throw InputError("FieldFamily: sigma callable returned wrong shape");
        return s;
    }
    Mat s(n_, m_);
    s.topRows(m_).setIdentity();
    if (n_ > m_) {
        Mat t = tau_(x);
        if (t.rows() != n_ - m_ || t.cols() != m_) throw InputError("FieldFamily: tau callable returned wrong shape");
        s.bottomRows(n_ - m_) = t;
    }
    return s;
}

std::vector<Mat> FieldFamily::sigma_jacobian(const Vec& x) const {
    check_point(x);
    if (!carnot_) {
        return sigma_jacobian_(x);
    }
    std::vector<Mat> out(static_cast<std::size_t>(n_), Mat::Zero(n_, m_));
    if (n_ > m_) {
        const auto dt = tau_jacobian_(x);
        if (dt.size() != static_cast<std::size_t>(n_)) throw InputError("FieldFamily: tau Jacobian has wrong length");
        for (int k = 0; k < n_; ++k) {
            out[static_cast<std::size_t>(k)].bottomRows(n_ - m_) = dt[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

Mat FieldFamily::tau(const Vec& x) const {
    if (!carnot_) throw InputError("FieldFamily '" + name_ + "' is not of Carnot type");
    check_point(x);
    return n_ > m_ ? tau_(x) : Mat(0, m_);
}

std::vector<Mat> FieldFamily::tau_jacobian(const Vec& x) const {
    if (!carnot_) throw InputError("FieldFamily '" + name_ + "' is not of Carnot type");
    check_point(x);
    return n_ > m_ ? tau_jacobian_(x) : std::vector<Mat>(static_cast<std::size_t>(n_), Mat(0, m_));
}

std::vector<Mat> FieldFamily::q_slices(const Vec& x) const {
    const Mat s = sigma(x);
    const auto ds = sigma_jacobian(x);
    // d[j*m+i] = D sigma^j sigma^i = sum_k (d sigma^j / d x_k) sigma^i_k
    std::vector<Vec> d(static_cast<std::size_t>(m_ * m_), Vec::Zero(n_));
    for (int j = 0; j < m_; ++j) {
        for (int i = 0; i < m_; ++i) {
            Vec& v = d[static_cast<std::size_t>(j * m_ + i)];
            for (int k = 0; k < n_; ++k) {
                v += ds[static_cast<std::size_t>(k)].col(j) * s(k, i);
            }
        }
    }
    std::vector<Mat> slices(static_cast<std::size_t>(n_), Mat::Zero(m_, m_));
    for (int a = 0; a < n_; ++a) {
        Mat& q = slices[static_cast<std::size_t>(a)];
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < m_; ++j) {
                q(i, j) = 0.5 * (d[static_cast<std::size_t>(j * m_ + i)](a) + d[static_cast<std::size_t>(i * m_ + j)](a));
            }
        }
    }
    return slices;
}

Mat FieldFamily::q_matrix(const Vec& x, const Vec& p) const {
    check_point(x);
    if (p.size() != n_) throw InputError("q_matrix: p has wrong dimension");
    const auto slices = q_slices(x);
    Mat q = Mat::Zero(m_, m_);
    for (int k = 0; k < n_; ++k) {
        q += p(k) * slices[static_cast<std::size_t>(k)];
    }
    return q;
}

bool FieldFamily::q_vanishes_at(const Vec& x, double tol) const {
    for (const auto& sl : q_slices(x)) {
        if (sl.size() > 0 && sl.cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

FieldFamily carnot_family_from_expressions(int n, int m, const std::vector<std::vector<std::string>>& tau,
                                           Smoothness smoothness) {
    if (m < 1 || m > n) throw InputError("carnot_family_from_expressions: need 1 <= m <= n");
    if (tau.size() != static_cast<std::size_t>(n - m)) {
        throw InputError("carnot_family_from_expressions: tau must have n-m = " + std::to_string(n - m) + " rows");
    }
    const auto vars = VariableSet::coordinates(n);
    auto entries = std::make_shared<std::vector<Expression>>();
    auto partials = std::make_shared<std::vector<Expression>>();  // [k][r][c]
    for (const auto& row : tau) {
        if (row.size() != static_cast<std::size_t>(m)) {
            throw InputError("carnot_family_from_expressions: each tau row needs m = " + std::to_string(m) + " entries");
        }
        for (const auto& text : row) entries->push_back(Expression::parse(text, vars));
    }
    for (int k = 0; k < n; ++k) {
        for (const auto& e : *entries) partials->push_back(e.derivative(k));
    }
    const int rows = n - m;
    auto tau_fn = [entries, rows, m](const Vec& x) {
        Mat t(rows, m);
        const std::span<const double> s{x.data(), static_cast<std::size_t>(x.size())};
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < m; ++c) t(r, c) = (*entries)[static_cast<std::size_t>(r * m + c)].evaluate(s);
        return t;
    };
    auto jac_fn = [partials, rows, m, n](const Vec& x) {
        std::vector<Mat> d(static_cast<std::size_t>(n), Mat(rows, m));
        const std::span<const double> s{x.data(), static_cast<std::size_t>(x.size())};
        std::size_t idx = 0;
        for (int k = 0; k < n; ++k)
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < m; ++c) d[static_cast<std::size_t>(k)](r, c) = (*partials)[idx++].evaluate(s);
        return d;
    };
    return FieldFamily::carnot_type(n, m, tau_fn, jac_fn, smoothness, "custom");
}

CarnotValidationReport validate_carnot_type(const FieldFamily& family, std::span<const Vec> samples,
                                            double jacobian_tol) {
    CarnotValidationReport rep;
    if (samples.empty()) {
        rep.message = "no sample points";
        return rep;
    }
    rep.identity_block = true;
    const int m = family.m();
    const int n = family.n();
    const Mat eye = Mat::Identity(m, m);
    rep.worst_point = samples.front();
    for (const Vec& x : samples) {
        ++rep.samples_checked;
        const Mat s = family.sigma(x);
        if ((s.topRows(m) - eye).cwiseAbs().maxCoeff() != 0.0) {
            rep.identity_block = false;
            rep.worst_point = x;
        }
        // Check the declared Jacobian of the whole sigma against central differences.
        const auto declared = family.sigma_jacobian(x);
        const auto fd = central_difference_jacobian([&family](const Vec& y) { return family.sigma(y); }, x);
        for (int k = 0; k < n; ++k) {
            const Mat diff = declared[static_cast<std::size_t>(k)] - fd[static_cast<std::size_t>(k)];
            const double r = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
            if (r > rep.max_jacobian_residual) {
                rep.max_jacobian_residual = r;
                if (rep.identity_block) {
                    rep.worst_point = x;
                }
            }
        }
    }
    rep.valid = rep.identity_block && rep.max_jacobian_residual <= jacobian_tol;
    if (!rep.identity_block) {
        rep.message = "sigma top block is not the identity: family is not of Carnot type";
    } else if (!rep.valid) {
        rep.message = "declared Jacobian disagrees with central differences (residual " +
                      std::to_string(rep.max_jacobian_residual) + ")";
    } else {
        rep.message = "ok";
    }
    return rep;
}

double xsquare_margin(const FieldFamily& family, std::span<const Vec> samples) {
    double eta = std::numeric_limits<double>::infinity();
    for (const Vec& x : samples) {
        const Mat s = family.sigma(x);
        const Mat a = s.transpose() * s + family.q_matrix(x, x);
        eta = std::min(eta, lambda_min(symmetrize(a)));
    }
    return eta;
}

}  // namespace carnot_ma
