#include "carnot_ma/scheme.hpp"

#include "carnot_ma/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carnot_ma {

Scheme::Scheme(std::shared_ptr<const Grid> grid, Hamiltonian h, GradientMode mode)
    : grid_(std::move(grid)), h_(std::move(h)), mode_(mode) {
    if (mode_ == GradientMode::automatic) {
        mode_ = h_.radial_in_q() ? GradientMode::upwind : GradientMode::centered;
    }
    if (mode_ == GradientMode::upwind && h_.depends_on_q() && !h_.radial_in_q()) {
        throw InputError("scheme: upwind gradients need H radial and nondecreasing in |q|");
    }
    const Grid& g = *grid_;
    const int n = g.n();
    const int dcount = g.dir_count();
    node_x_.reserve(g.interior().size());
    for (std::int32_t id : g.interior()) node_x_.push_back(g.coordinates(id));
    for (const Vec& x : node_x_) {
        if (!g.family().q_vanishes_at(x, 0.0)) {
            q_active_ = true;
            break;
        }
    }
    if (q_active_) {
        q_coeff_.assign(node_x_.size() * static_cast<std::size_t>(dcount * n), 0.0);
        for (std::size_t k = 0; k < node_x_.size(); ++k) {
            const std::vector<Mat> slices = g.family().q_slices(node_x_[k]);
            for (int d = 0; d < dcount; ++d) {
                const Vec v = g.directions().directions.col(d);
                for (int i = 0; i < n; ++i) {
                    q_coeff_[(k * static_cast<std::size_t>(dcount) + static_cast<std::size_t>(d)) *
                                 static_cast<std::size_t>(n) +
                             static_cast<std::size_t>(i)] = v.dot(slices[static_cast<std::size_t>(i)] * v);
                }
            }
        }
    }
}

std::vector<Vec> Scheme::lattice_gradients(const GridFunction& u) const {
    const Grid& g = *grid_;
    const int n = g.n();
    std::vector<Vec> out(g.interior().size(), Vec::Zero(n));
    for (std::size_t k = 0; k < g.interior().size(); ++k) {
        const std::vector<int> idx = g.multi_index(g.interior()[k]);
        for (int i = 0; i < n; ++i) {
            std::vector<int> lo = idx;
            std::vector<int> hi = idx;
            const int c = g.counts()[static_cast<std::size_t>(i)];
            lo[static_cast<std::size_t>(i)] = std::max(0, idx[static_cast<std::size_t>(i)] - 1);
            hi[static_cast<std::size_t>(i)] = std::min(c - 1, idx[static_cast<std::size_t>(i)] + 1);
            const double dx = (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]) * g.spacing()(i);
            out[k](i) = (u.at(g.id_of(hi)) - u.at(g.id_of(lo))) / dx;
        }
    }
    return out;
}

void Scheme::prepare(const GridFunction& u, std::size_t k, const Vec* lagged, NodeStencil& st) const {
    const Grid& g = *grid_;
    const int dcount = g.dir_count();
    const int n = g.n();
    const int m = g.m();
    st.k = k;
    st.a.resize(static_cast<std::size_t>(dcount));
    st.b.resize(static_cast<std::size_t>(dcount));
    const double u0 = u.interior_value(k);
    for (int d = 0; d < dcount; ++d) {
        const double sp = g.arm(k, d, 0).s;
        const double sm = g.arm(k, d, 1).s;
        const double up = u.arm_value(k, d, 0);
        const double um = u.arm_value(k, d, 1);
        const double denom = sp * sm * (sp + sm);
        double a = 2.0 * (sm * up + sp * um) / denom;
        if (q_active_ && lagged != nullptr) {
            const double* c = &q_coeff_[(k * static_cast<std::size_t>(dcount) + static_cast<std::size_t>(d)) *
                                        static_cast<std::size_t>(n)];
            for (int i = 0; i < n; ++i) a += c[i] * (*lagged)(i);
        }
        st.a[static_cast<std::size_t>(d)] = a;
        st.b[static_cast<std::size_t>(d)] = 2.0 / (sp * sm);
    }
    if (h_.depends_on_q()) {
        const std::vector<int>& f0 = g.directions().frames.front();
        st.u_plus.resize(static_cast<std::size_t>(m));
        st.u_minus.resize(static_cast<std::size_t>(m));
        st.s_plus.resize(static_cast<std::size_t>(m));
        st.s_minus.resize(static_cast<std::size_t>(m));
        st.frozen_gradient.resize(m);
        for (int j = 0; j < m; ++j) {
            const int d = f0[static_cast<std::size_t>(j)];
            const double sp = g.arm(k, d, 0).s;
            const double sm = g.arm(k, d, 1).s;
            const double up = u.arm_value(k, d, 0);
            const double um = u.arm_value(k, d, 1);
            st.u_plus[static_cast<std::size_t>(j)] = up;
            st.u_minus[static_cast<std::size_t>(j)] = um;
            st.s_plus[static_cast<std::size_t>(j)] = sp;
            st.s_minus[static_cast<std::size_t>(j)] = sm;
            st.frozen_gradient(j) = (sm * sm * (up - u0) + sp * sp * (u0 - um)) / (sp * sm * (sp + sm));
        }
    }
}

double Scheme::h_root(const NodeStencil& st, double u0) const {
    const int m = grid_->m();
    const Vec& x = node_x_[st.k];
    if (!h_.depends_on_q()) return h_.root(x, u0, Vec::Zero(m), m);
    if (mode_ == GradientMode::upwind) {
        Vec q(m);
        for (int j = 0; j < m; ++j) {
            const auto js = static_cast<std::size_t>(j);
            q(j) = std::max({0.0, (u0 - st.u_minus[js]) / st.s_minus[js], (u0 - st.u_plus[js]) / st.s_plus[js]});
        }
        return h_.root(x, u0, q, m);
    }
    return h_.root(x, u0, st.frozen_gradient, m);
}

double Scheme::residual_with_frames(const NodeStencil& st, double u0,
                                    const std::vector<std::vector<int>>& frames) const {
    const int m = grid_->m();
    double convex_branch = -std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < st.a.size(); ++d) convex_branch = std::max(convex_branch, st.b[d] * u0 - st.a[d]);
    double min_root = std::numeric_limits<double>::infinity();
    for (const std::vector<int>& f : frames) {
        double prod = 1.0;
        for (int d : f) {
            const double delta = st.a[static_cast<std::size_t>(d)] - st.b[static_cast<std::size_t>(d)] * u0;
            prod *= std::max(delta, 0.0);
        }
        const double r = m == 1 ? prod : (m == 2 ? std::sqrt(prod) : std::pow(prod, 1.0 / m));
        min_root = std::min(min_root, r);
    }
    return std::max(convex_branch, -min_root + h_root(st, u0));
}

double Scheme::residual(const NodeStencil& st, double u0) const {
    return residual_with_frames(st, u0, grid_->directions().frames);
}

double Scheme::residual(const GridFunction& u, std::size_t k) const {
    NodeStencil st;
    if (q_active_) {
        const std::vector<Vec> grads = lattice_gradients(u);
        prepare(u, k, &grads[k], st);
    } else {
        prepare(u, k, nullptr, st);
    }
    return residual(st, u.interior_value(k));
}

Scheme::NodeSolve Scheme::solve(const NodeStencil& st, double current) const {
    NodeSolve out;
    double lo = current;
    double f_lo = residual(st, lo);
    out.residual_before = f_lo;
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < st.a.size(); ++d) hi = std::min(hi, st.a[d] / st.b[d]);
    double f_hi = 0.0;
    if (f_lo > 0.0) {
        // Not a subsolution at this node: walk down to a sign change.
        out.decreased = true;
        hi = lo;
        f_hi = f_lo;
        double step = 1e-6 * (1.0 + std::abs(lo));
        for (int it = 0; it < 200; ++it) {
            lo = hi - step;
            f_lo = residual(st, lo);
            if (f_lo <= 0.0) break;
            hi = lo;
            f_hi = f_lo;
            step *= 2.0;
        }
    } else {
        if (!(hi > lo)) {
            out.value = lo;
            return out;
        }
        f_hi = residual(st, hi);
        if (f_hi <= 0.0) {
            out.value = hi;
            return out;
        }
    }
    // Illinois false position on [lo, hi] with F(lo) <= 0 < F(hi).
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        const double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo))) break;
        double c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
        const double f_c = residual(st, c);
        if (f_c <= 0.0) {
            lo = c;
            f_lo = f_c;
            if (f_c == 0.0) break;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = c;
            f_hi = f_c;
            if (side == 1) f_lo *= 0.5;
            side = 1;
        }
        if (it % 8 == 7) {
            // Guard against slow one-sided convergence.
            const double mid = 0.5 * (lo + hi);
            const double f_mid = residual(st, mid);
            if (f_mid <= 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
            side = 0;
        }
    }
    out.value = lo;
    return out;
}

}  // namespace carnot_ma
