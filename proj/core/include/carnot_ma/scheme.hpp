#pragma once

#include "carnot_ma/grid.hpp"
#include "carnot_ma/hamiltonian.hpp"

#include <memory>
#include <vector>

namespace carnot_ma {

/// How D_X u enters H. `upwind` uses the monotone one-sided magnitudes
/// max(0, (u0 - u-)/s-, (u0 - u+)/s+) per field and requires H radial in q;
/// `centered` freezes the unequal-arm centered difference during a node solve.
enum class GradientMode { automatic, upwind, centered };

/// Second differences at one node, affine in the node value:
/// Delta_d = a[d] - b[d] * u0.
struct NodeStencil {
    std::size_t k = 0;
    std::vector<double> a;
    std::vector<double> b;
    // Arms along the first frame, used for D_X u.
    std::vector<double> u_plus, u_minus, s_plus, s_minus;
    Vec frozen_gradient;  // centered mode
};

/// Max-form wide-stencil discretization
///   F = max( max_d -Delta_d , -min_frames prod_j (Delta_{f_j})_+^{1/m} + H^{1/m}(x, u0, q) ),
/// nondecreasing in the node value and nonincreasing in its neighbours.
class Scheme {
public:
    Scheme(std::shared_ptr<const Grid> grid, Hamiltonian h, GradientMode mode = GradientMode::automatic);

    const Grid& grid() const { return *grid_; }
    const Hamiltonian& hamiltonian() const { return h_; }
    GradientMode gradient_mode() const { return mode_; }
    bool has_q_correction() const { return q_active_; }

    /// Euclidean centered gradients of `u` at all interior nodes (lattice neighbours).
    std::vector<Vec> lattice_gradients(const GridFunction& u) const;

    /// Fills the stencil of interior node k; `lagged` supplies the Euclidean
    /// gradient used by the Q correction (ignored when Q vanishes).
    void prepare(const GridFunction& u, std::size_t k, const Vec* lagged, NodeStencil& out) const;

    double residual(const NodeStencil& st, double u0) const;

    /// Residual at node k with the Q correction taken from the current values.
    double residual(const GridFunction& u, std::size_t k) const;

    /// Residual with an explicit direction subset (frames restricted to `frames`).
    double residual_with_frames(const NodeStencil& st, double u0, const std::vector<std::vector<int>>& frames) const;

    struct NodeSolve {
        double value = 0.0;
        double residual_before = 0.0;
        bool decreased = false;
    };

    /// Root of F(u0) = 0 bracketed from the current value; returns the lower end
    /// of the final bracket so that F(value) <= 0.
    NodeSolve solve(const NodeStencil& st, double current) const;

private:
    double h_root(const NodeStencil& st, double u0) const;

    std::shared_ptr<const Grid> grid_;
    Hamiltonian h_;
    GradientMode mode_;
    bool q_active_ = false;
    std::vector<Vec> node_x_;
    std::vector<double> q_coeff_;  // per node, per direction: n coefficients of v^T Q(x, .) v
};

}  // namespace carnot_ma
