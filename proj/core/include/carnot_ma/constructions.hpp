#pragma once

#include "carnot_ma/domain.hpp"
#include "carnot_ma/fields.hpp"
#include "carnot_ma/hamiltonian.hpp"
#include "carnot_ma/jets.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace carnot_ma {

enum class HeisenbergOracle { w_quartic, koranyi_norm, k_H, f_144 };

std::string to_string(HeisenbergOracle which);

/// Closed-form functions on H^1 with exact Euclidean jets:
/// w = (x1^2 + x2^2)^2 + t^2, |x|_H = w^{1/4},
/// k_H = (12 psi / (1 + 16 psi w))^2 and f = 144 psi^2 with psi = x1^2 + x2^2.
/// The norm's jet throws DomainError at the origin.
SmoothFunction explicit_heisenberg_oracle(HeisenbergOracle which);

/// Same, rejecting families other than H^1.
SmoothFunction explicit_heisenberg_oracle(HeisenbergOracle which, const FieldFamily& family);

/// Horizontal jets of a smooth function.
HorizontalJetField horizontal_jets(const FieldFamily& family, const SmoothFunction& u);

struct PerturbParams {
    double epsilon = 0.0;
    double mu = 0.0;
    double lambda = 1.0;     // max of the exponential over the domain
    double epsilon0 = 0.0;   // admissibility cap, epsilon <= epsilon0
    double alpha = 0.0;      // strictness margin on the inner samples
    double nu_min = 0.0;     // certified lower bound for the convexity modulus
    double lipschitz_L = 0.0;
    double gradient_C = 0.0;
    bool xsquare_variant = false;  // exp(mu |x|^2 / 2) instead of the first m coordinates
};

struct PerturbOptions {
    double gradient_bound = -1.0;   // C with |D_X u| <= C on the inner samples; < 0: measured
    double lipschitz_bound = -1.0;  // L_C; < 0: lipschitz_root_check at R = max(C, sup|u|)
    double mu_min = 1.0;
    int max_doublings = 20;
    double convexity_tol = 1e-8;
    std::size_t domain_samples = 2000;
    std::uint64_t seed = 11;
};

struct StrictSubsolution {
    ScalarField value;
    HorizontalJetField jet;
    PerturbParams params;
    double min_lambda = 0.0;    // sampled lambda_min of D^2_X u_eps on the inner samples
    double max_residual = 0.0;  // sampled det-form residual on the inner samples
    Vec worst_point;
    bool certified = false;
    std::vector<std::pair<double, double>> mu_trace;  // (mu, alpha) along the doubling schedule
};

/// u_eps = u + eps (exp(mu sum_{i<=m} x_i^2 / 2) - lambda), with mu chosen from
/// the Lipschitz constant of H^{1/m} and doubled until the inner samples certify
/// strictness. Throws UnsupportedError when the family is neither of Carnot type
/// nor satisfies the |x|^2 convexity condition, InputError when u is not
/// X-convex on the inner samples or epsilon exceeds the admissibility cap.
StrictSubsolution perturb_to_strict(const ScalarField& u, const HorizontalJetField& u_jet, const FieldFamily& family,
                                    const Hamiltonian& h, const DomainSpec& domain, std::span<const Vec> inner_samples,
                                    double epsilon, const PerturbOptions& options = {});

StrictSubsolution perturb_to_strict(const SmoothFunction& u, const FieldFamily& family, const Hamiltonian& h,
                                    const DomainSpec& domain, std::span<const Vec> inner_samples, double epsilon,
                                    const PerturbOptions& options = {});

/// Sampled margin alpha = -max residual of u_eps at fixed mu (no positivity clamp).
double strictness_margin(const ScalarField& u, const HorizontalJetField& u_jet, const FieldFamily& family,
                         const Hamiltonian& h, std::span<const Vec> inner_samples, double epsilon, double mu,
                         double lambda, bool xsquare_variant);

struct BarrierParams {
    double mu = 0.0;
    double lambda = 0.0;
    double c = 0.0;      // -c I <= D^2_X g
    double gamma = 0.0;  // D^2_X Phi <= -gamma I
    double K = 0.0;
};

struct BarrierOptions {
    std::size_t interior_samples = 2000;
    std::size_t boundary_samples = 400;
    std::uint64_t seed = 5;
    double tol = 1e-8;
    int max_doublings = 20;
};

struct LowerBarrier {
    bool accepted = false;
    std::string diagnostic;
    SmoothFunction w;
    BarrierParams params;
    double min_lambda = 0.0;
    double max_residual = 0.0;
    double max_boundary_gap = 0.0;
    int doublings = 0;
};

/// w = lambda (exp(-mu Phi) - 1) + g on a uniformly X-convex domain. The
/// starting (mu, lambda) follow the growth constants of H; lambda is then doubled
/// until the samples certify D^2_X w >= 0 and the det-form residual <= 0.
LowerBarrier lower_barrier(const DomainSpec& domain, const SmoothFunction& g, const FieldFamily& family,
                           const Hamiltonian& h, const BarrierOptions& options = {});

/// Largest gamma with D^2_X Phi <= -gamma I on the samples (exact jets).
double domain_convexity_constant(const DomainSpec& domain, const FieldFamily& family, std::span<const Vec> samples);

enum class UpperBarrierKind { automatic, zero, convex_pair, uniform, constant };

struct UpperBarrier {
    UpperBarrierKind kind = UpperBarrierKind::automatic;
    SmoothFunction W;
    double lambda = 0.0;
    double max_lambda_max = 0.0;  // sampled lambda_max(D^2_X W)
    bool certified = false;
};

/// Supersolution attaining g on the boundary: W = 0 when g vanishes, otherwise
/// W = lambda Phi + g with D^2_X W <= 0 on the samples. `constant` returns
/// max_{boundary} g. Throws UnsupportedError when no case applies.
UpperBarrier upper_barrier(const DomainSpec& domain, const SmoothFunction& g, const FieldFamily& family,
                           UpperBarrierKind kind = UpperBarrierKind::automatic,
                           const BarrierOptions& options = {});

struct ExponentialSubsolution {
    SmoothFunction v;
    double mu = 0.0;
    double shift = 0.0;  // v = exp(mu psi / 2) - shift, psi = sum_{i<=m} x_i^2
    bool certified = false;
};

/// Subsolution below min g for domains without uniform X-convexity:
/// v = exp(mu psi / 2) - max_domain exp(mu psi / 2) + min g, with mu doubled
/// from mu_min until the det-form residual is <= 0 on the samples.
ExponentialSubsolution exponential_subsolution(const DomainSpec& domain, const FieldFamily& family,
                                               const Hamiltonian& h, double g_min, std::span<const Vec> samples,
                                               double mu_min = 1.0, int max_doublings = 20);

/// max over the domain of sum_{i<=m} x_i^2 (boundary samples plus the given points).
double max_horizontal_radius_sq(const DomainSpec& domain, int m, std::span<const Vec> extra,
                                std::size_t boundary_samples = 2000, std::uint64_t seed = 3);

}  // namespace carnot_ma
