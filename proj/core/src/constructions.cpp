#include "carnot_ma/constructions.hpp"

#include "carnot_ma/calculus.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/expression.hpp"
#include "carnot_ma/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carnot_ma {

std::string to_string(HeisenbergOracle which) {
    switch (which) {
        case HeisenbergOracle::w_quartic: return "w_quartic";
        case HeisenbergOracle::koranyi_norm: return "koranyi_norm";
        case HeisenbergOracle::k_H: return "k_H";
        case HeisenbergOracle::f_144: return "f_144";
    }
    return "unknown";
}

namespace {

void require_h1_point(const Vec& x) {
    if (x.size() != 3) throw InputError("Heisenberg oracle: point must lie in R^3");
}

EuclideanJet2 w_jet(const Vec& x) {
    require_h1_point(x);
    const double psi = x(0) * x(0) + x(1) * x(1);
    EuclideanJet2 j{psi * psi + x(2) * x(2), Vec(3), Mat::Zero(3, 3)};
    j.gradient << 4.0 * psi * x(0), 4.0 * psi * x(1), 2.0 * x(2);
    j.hessian(0, 0) = 4.0 * psi + 8.0 * x(0) * x(0);
    j.hessian(1, 1) = 4.0 * psi + 8.0 * x(1) * x(1);
    j.hessian(0, 1) = j.hessian(1, 0) = 8.0 * x(0) * x(1);
    j.hessian(2, 2) = 2.0;
    return j;
}

const ExpressionField& k_h_field() {
    static const ExpressionField f = ExpressionField::parse(
        "(12*(x1^2+x2^2)/(1+16*(x1^2+x2^2)*((x1^2+x2^2)^2+t^2)))^2", 3);
    return f;
}

const ExpressionField& f144_field() {
    static const ExpressionField f = ExpressionField::parse("144*(x1^2+x2^2)^2", 3);
    return f;
}

}  // namespace

SmoothFunction explicit_heisenberg_oracle(HeisenbergOracle which) {
    switch (which) {
        case HeisenbergOracle::w_quartic:
            return {[](const Vec& x) { return w_jet(x).value; }, w_jet};
        case HeisenbergOracle::koranyi_norm:
            return {[](const Vec& x) {
                        require_h1_point(x);
                        return std::pow(heisenberg_gauge(x), 0.25);
                    },
                    [](const Vec& x) {
                        const EuclideanJet2 w = w_jet(x);
                        if (w.value <= 0.0) throw DomainError("koranyi_norm: jet undefined at the origin");
                        const double a = 0.25 * std::pow(w.value, -0.75);
                        const double b = -(3.0 / 16.0) * std::pow(w.value, -1.75);
                        return EuclideanJet2{std::pow(w.value, 0.25), a * w.gradient,
                                             a * w.hessian + b * w.gradient * w.gradient.transpose()};
                    }};
        case HeisenbergOracle::k_H: {
            const ExpressionField& f = k_h_field();
            return f.as_function();
        }
        case HeisenbergOracle::f_144: {
            const ExpressionField& f = f144_field();
            return f.as_function();
        }
    }
    throw InputError("unknown Heisenberg oracle");
}

SmoothFunction explicit_heisenberg_oracle(HeisenbergOracle which, const FieldFamily& family) {
    if (family.n() != 3 || family.m() != 2 || family.name() != "heisenberg1") {
        throw InputError("explicit_heisenberg_oracle: requires the first Heisenberg family");
    }
    return explicit_heisenberg_oracle(which);
}

HorizontalJetField horizontal_jets(const FieldFamily& family, const SmoothFunction& u) {
    return [family, jet = u.jet](const Vec& x) { return horizontal_jet_exact(family, x, jet(x)); };
}

double max_horizontal_radius_sq(const DomainSpec& domain, int m, std::span<const Vec> extra,
                                std::size_t boundary_samples, std::uint64_t seed) {
    double best = 0.0;
    auto visit = [&](const Vec& x) { best = std::max(best, x.head(m).squaredNorm()); };
    for (const Vec& z : domain.boundary_samples(boundary_samples, seed)) visit(z);
    for (const Vec& x : extra) visit(x);
    return best;
}

namespace {

// Euclidean jet of exp(mu |P x|^2 / 2) with P the projection on the first k coordinates.
EuclideanJet2 exp_jet(const Vec& x, double mu, int k) {
    const int n = static_cast<int>(x.size());
    Vec y = Vec::Zero(n);
    y.head(k) = x.head(k);
    const double e = std::exp(0.5 * mu * y.squaredNorm());
    Mat hess = Mat::Zero(n, n);
    hess.topLeftCorner(k, k).setIdentity();
    hess += mu * y * y.transpose();
    return {e, mu * e * y, mu * e * hess};
}

struct PerturbedJet {
    double value;
    HorizontalJet jet;
};

PerturbedJet perturbed(const ScalarField& u, const HorizontalJetField& u_jet, const FieldFamily& family,
                       const Vec& x, double epsilon, double mu, double lambda, int k) {
    const EuclideanJet2 e = exp_jet(x, mu, k);
    const HorizontalJet he = horizontal_jet_exact(family, x, e);
    HorizontalJet j = u_jet(x);
    const double value = u(x) + epsilon * (e.value - lambda);
    j.value = value;
    j.h_gradient += epsilon * he.h_gradient;
    j.h_hessian += epsilon * he.h_hessian;
    return {value, j};
}

}  // namespace

double strictness_margin(const ScalarField& u, const HorizontalJetField& u_jet, const FieldFamily& family,
                         const Hamiltonian& h, std::span<const Vec> inner_samples, double epsilon, double mu,
                         double lambda, bool xsquare_variant) {
    const int k = xsquare_variant ? family.n() : family.m();
    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec& x : inner_samples) {
        const PerturbedJet p = perturbed(u, u_jet, family, x, epsilon, mu, lambda, k);
        worst = std::max(worst, ma_residual(OperatorForm::det, x, p.value, p.jet, h));
    }
    return -worst;
}

StrictSubsolution perturb_to_strict(const ScalarField& u, const HorizontalJetField& u_jet, const FieldFamily& family,
                                    const Hamiltonian& h, const DomainSpec& domain, std::span<const Vec> inner_samples,
                                    double epsilon, const PerturbOptions& options) {
    if (!(epsilon >= 0.0)) throw InputError("perturb_to_strict: epsilon must be nonnegative");
    if (inner_samples.empty()) throw InputError("perturb_to_strict: inner region has no samples");

    std::vector<Vec> probe(inner_samples.begin(), inner_samples.end());
    for (Vec& x : domain.interior_samples(options.domain_samples / 4 + 1, options.seed)) probe.push_back(std::move(x));

    PerturbParams params;
    params.epsilon = epsilon;
    const CarnotValidationReport carnot = validate_carnot_type(family, probe);
    double eta = 1.0;
    if (!carnot.valid) {
        eta = xsquare_margin(family, probe);
        if (!(eta > 0.0)) {
            throw UnsupportedError("perturb_to_strict: family is neither of Carnot type nor makes |x|^2 uniformly X-convex");
        }
        params.xsquare_variant = true;
    }
    const int k = params.xsquare_variant ? family.n() : family.m();

    double min_lambda_u = std::numeric_limits<double>::infinity();
    double grad_c = 0.0;
    double sup_u = 0.0;
    for (const Vec& x : inner_samples) {
        const HorizontalJet j = u_jet(x);
        min_lambda_u = std::min(min_lambda_u, lambda_min(j.h_hessian));
        grad_c = std::max(grad_c, j.h_gradient.norm());
        sup_u = std::max(sup_u, std::abs(u(x)));
    }
    if (min_lambda_u < -options.convexity_tol) {
        throw InputError("perturb_to_strict: u is not X-convex on the inner samples");
    }

    StrictSubsolution out;
    if (epsilon == 0.0) {
        out.value = u;
        out.jet = u_jet;
        out.params = params;
        out.min_lambda = min_lambda_u;
        out.max_residual = -strictness_margin(u, u_jet, family, h, inner_samples, 0.0, 0.0, 1.0, false);
        return out;
    }

    params.gradient_C = options.gradient_bound >= 0.0 ? options.gradient_bound : grad_c;
    if (options.lipschitz_bound >= 0.0) {
        params.lipschitz_L = options.lipschitz_bound;
    } else {
        const std::size_t nx = std::min<std::size_t>(inner_samples.size(), 64);
        const LipschitzCheckResult lip = lipschitz_root_check(h, family.m(), std::max(params.gradient_C, sup_u) + 1.0,
                                                              inner_samples.first(nx), 2000, options.seed);
        if (!lip.passes) throw InputError("perturb_to_strict: H^{1/m} is not Lipschitz in q on the sampled box");
        params.lipschitz_L = lip.L;
    }

    const double L = params.lipschitz_L;
    const int m = family.m();
    double mu_formula = 0.0;
    for (const Vec& x : inner_samples) {
        const double rho = x.head(k).norm();
        mu_formula = std::max(mu_formula, (std::pow(L * rho, m) - 1.0) * L * L);
    }
    double mu = std::max(options.mu_min, mu_formula > 0.0 ? 1.01 * mu_formula : 0.0);

    const double rho2_max = max_horizontal_radius_sq(domain, k, probe, options.domain_samples, options.seed);
    double rho2_min = std::numeric_limits<double>::infinity();
    for (const Vec& x : inner_samples) rho2_min = std::min(rho2_min, x.head(k).squaredNorm());

    for (int d = 0; d <= options.max_doublings; ++d, mu *= 2.0) {
        const double lambda = std::exp(0.5 * mu * rho2_max);
        const double alpha = strictness_margin(u, u_jet, family, h, inner_samples, epsilon, mu, lambda,
                                               params.xsquare_variant);
        const double nu_min = epsilon * mu * eta * std::exp(0.5 * mu * rho2_min);
        double min_lambda = std::numeric_limits<double>::infinity();
        for (const Vec& x : inner_samples) {
            const PerturbedJet p = perturbed(u, u_jet, family, x, epsilon, mu, lambda, k);
            min_lambda = std::min(min_lambda, lambda_min(p.jet.h_hessian));
        }
        out.mu_trace.emplace_back(mu, alpha);
        params.mu = mu;
        params.lambda = lambda;
        params.alpha = std::max(alpha, 0.0);
        params.nu_min = nu_min;
        out.min_lambda = min_lambda;
        out.max_residual = -alpha;
        if (alpha > 0.0 && min_lambda >= nu_min - options.convexity_tol) {
            out.certified = true;
            break;
        }
    }

    const double rho_max = std::sqrt(rho2_max);
    params.epsilon0 = rho_max > 0.0 ? std::exp(-0.5 * params.mu * rho2_max) / (params.mu * rho_max)
                                    : std::numeric_limits<double>::infinity();
    if (epsilon > params.epsilon0) {
        throw InputError("perturb_to_strict: epsilon exceeds the admissibility cap " + std::to_string(params.epsilon0));
    }

    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec& x : inner_samples) {
        const PerturbedJet p = perturbed(u, u_jet, family, x, epsilon, params.mu, params.lambda, k);
        const double r = ma_residual(OperatorForm::det, x, p.value, p.jet, h);
        if (r > worst) {
            worst = r;
            out.worst_point = x;
        }
    }

    out.params = params;
    const double mu_f = params.mu;
    const double lam_f = params.lambda;
    out.value = [u, epsilon, mu_f, lam_f, k](const Vec& x) {
        return u(x) + epsilon * (std::exp(0.5 * mu_f * x.head(k).squaredNorm()) - lam_f);
    };
    out.jet = [u, u_jet, family, epsilon, mu_f, lam_f, k](const Vec& x) {
        return perturbed(u, u_jet, family, x, epsilon, mu_f, lam_f, k).jet;
    };
    return out;
}

StrictSubsolution perturb_to_strict(const SmoothFunction& u, const FieldFamily& family, const Hamiltonian& h,
                                    const DomainSpec& domain, std::span<const Vec> inner_samples, double epsilon,
                                    const PerturbOptions& options) {
    return perturb_to_strict(u.value, horizontal_jets(family, u), family, h, domain, inner_samples, epsilon, options);
}

double domain_convexity_constant(const DomainSpec& domain, const FieldFamily& family, std::span<const Vec> samples) {
    double gamma = std::numeric_limits<double>::infinity();
    for (const Vec& x : samples) {
        const HorizontalJet j = horizontal_jet_exact(family, x, domain.phi_jet(x));
        gamma = std::min(gamma, -lambda_max(j.h_hessian));
    }
    return gamma;
}

namespace {

std::vector<Vec> closure_samples(const DomainSpec& domain, const BarrierOptions& o, std::vector<Vec>* boundary) {
    std::vector<Vec> interior = domain.interior_samples(o.interior_samples, o.seed);
    interior.push_back(domain.star_center());
    *boundary = domain.boundary_samples(o.boundary_samples, o.seed + 1);
    return interior;
}

}  // namespace

LowerBarrier lower_barrier(const DomainSpec& domain, const SmoothFunction& g, const FieldFamily& family,
                           const Hamiltonian& h, const BarrierOptions& options) {
    LowerBarrier out;
    std::vector<Vec> boundary;
    const std::vector<Vec> interior = closure_samples(domain, options, &boundary);
    std::vector<Vec> all = interior;
    all.insert(all.end(), boundary.begin(), boundary.end());
    const int m = family.m();

    const double gamma = domain_convexity_constant(domain, family, all);
    out.params.gamma = gamma;
    if (!(gamma > 0.0)) {
        out.diagnostic = "domain is not uniformly X-convex on the samples (gamma = " + std::to_string(gamma) + ")";
        return out;
    }

    double g_max = -std::numeric_limits<double>::infinity();
    for (const Vec& z : boundary) g_max = std::max(g_max, g.value(z));

    double L = 0.0;
    double M = 0.0;
    {
        const std::size_t nx = std::min<std::size_t>(all.size(), 64);
        const std::vector<double> radii = default_growth_radii();
        const GrowthCheckResult growth =
            growth_check(h, m, g_max, std::span<const Vec>(all).first(nx), radii, options.seed);
        if (!growth.passes) {
            out.diagnostic = "growth condition H^{1/m}(x,R,p) <= L|p| + M fails at R = max g; no lower barrier";
            return out;
        }
        L = growth.L;
        M = growth.M;
        if (const auto& declared = h.declared_growth()) {
            L = declared->L;
            M = declared->M;
        }
    }

    double c = 0.0;
    double dg = 0.0;
    double p_max = 0.0;
    double phi_max = 0.0;
    double mu_need = 0.0;
    for (const Vec& x : all) {
        const HorizontalJet jg = horizontal_jet_exact(family, x, g.jet(x));
        c = std::max(c, -lambda_min(jg.h_hessian));
        dg = std::max(dg, jg.h_gradient.norm());
        phi_max = std::max(phi_max, domain.phi(x));
    }
    const double K = std::pow(2.0, m - 1) * std::max(std::pow(M + L * dg, m), std::pow(L, m));
    for (const Vec& x : all) {
        const double p = (family.sigma(x).transpose() * domain.phi_jet(x).gradient).norm();
        p_max = std::max(p_max, p);
        if (p > 1e-12) {
            mu_need = std::max(mu_need, 0.5 * m * gamma * std::pow(2.0 / gamma, m) * K * std::pow(p, m - 2));
        }
    }
    (void)p_max;
    const double mu = std::max(1.0, mu_need);
    double lambda = 2.0 / (mu * gamma) * std::max(c, std::pow(K, 1.0 / m)) * std::exp(mu * phi_max);
    if (!(lambda > 0.0)) lambda = 1.0;

    out.params.mu = mu;
    out.params.c = c;
    out.params.K = K;

    for (int d = 0; d <= options.max_doublings; ++d, lambda *= 2.0) {
        const SmoothFunction phi = domain.phi_function();
        SmoothFunction w{[phi, g, lambda, mu](const Vec& x) {
                             return lambda * (std::exp(-mu * phi.value(x)) - 1.0) + g.value(x);
                         },
                         [phi, g, lambda, mu](const Vec& x) {
                             const EuclideanJet2 p = phi.jet(x);
                             const EuclideanJet2 gj = g.jet(x);
                             const double e = std::exp(-mu * p.value);
                             return EuclideanJet2{
                                 lambda * (e - 1.0) + gj.value, -mu * lambda * e * p.gradient + gj.gradient,
                                 mu * lambda * e * (mu * p.gradient * p.gradient.transpose() - p.hessian) +
                                     gj.hessian};
                         }};
        double min_lambda = std::numeric_limits<double>::infinity();
        double max_res = -std::numeric_limits<double>::infinity();
        for (const Vec& x : interior) {
            const HorizontalJet j = horizontal_jet_exact(family, x, w.jet(x));
            min_lambda = std::min(min_lambda, lambda_min(j.h_hessian));
            max_res = std::max(max_res, ma_residual(OperatorForm::det, x, j.value, j, h));
        }
        double gap = 0.0;
        for (const Vec& z : boundary) gap = std::max(gap, std::abs(w.value(z) - g.value(z)));
        out.w = w;
        out.params.lambda = lambda;
        out.min_lambda = min_lambda;
        out.max_residual = max_res;
        out.max_boundary_gap = gap;
        out.doublings = d;
        if (min_lambda >= -options.tol && max_res <= options.tol) {
            out.accepted = true;
            return out;
        }
    }
    out.diagnostic = "lambda doubling reached the cap without certification";
    return out;
}

UpperBarrier upper_barrier(const DomainSpec& domain, const SmoothFunction& g, const FieldFamily& family,
                           UpperBarrierKind kind, const BarrierOptions& options) {
    std::vector<Vec> boundary;
    const std::vector<Vec> interior = closure_samples(domain, options, &boundary);
    std::vector<Vec> all = interior;
    all.insert(all.end(), boundary.begin(), boundary.end());

    UpperBarrier out;
    if (kind == UpperBarrierKind::constant) {
        double g_max = -std::numeric_limits<double>::infinity();
        for (const Vec& z : boundary) g_max = std::max(g_max, g.value(z));
        out.kind = kind;
        out.W = {[g_max](const Vec&) { return g_max; },
                 [g_max](const Vec& x) {
                     EuclideanJet2 j = EuclideanJet2::zero(static_cast<int>(x.size()));
                     j.value = g_max;
                     return j;
                 }};
        out.certified = true;
        return out;
    }

    bool g_zero = true;
    for (const Vec& x : all) g_zero = g_zero && g.value(x) == 0.0;
    if (kind == UpperBarrierKind::zero || (kind == UpperBarrierKind::automatic && g_zero)) {
        if (!g_zero) throw UnsupportedError("upper_barrier: g does not vanish");
        out.kind = UpperBarrierKind::zero;
        out.W = {[](const Vec&) { return 0.0; },
                 [](const Vec& x) { return EuclideanJet2::zero(static_cast<int>(x.size())); }};
        out.certified = true;
        return out;
    }

    const double gamma = domain_convexity_constant(domain, family, all);
    double g_top = -std::numeric_limits<double>::infinity();
    for (const Vec& x : all) {
        g_top = std::max(g_top, lambda_max(horizontal_jet_exact(family, x, g.jet(x)).h_hessian));
    }

    double lambda = 0.0;
    if ((kind == UpperBarrierKind::automatic || kind == UpperBarrierKind::uniform) && gamma > 0.0) {
        out.kind = UpperBarrierKind::uniform;
        lambda = std::max(g_top, 0.0) / gamma + 1.0;
    } else if ((kind == UpperBarrierKind::automatic || kind == UpperBarrierKind::convex_pair) &&
               gamma >= -options.tol && g_top <= options.tol) {
        out.kind = UpperBarrierKind::convex_pair;
        lambda = 1.0;
    } else {
        throw UnsupportedError("upper_barrier: neither g = 0, an X-convex domain with X-concave g, "
                               "nor a uniformly X-convex domain");
    }

    const SmoothFunction phi = domain.phi_function();
    out.lambda = lambda;
    out.W = {[phi, g, lambda](const Vec& x) { return lambda * phi.value(x) + g.value(x); },
             [phi, g, lambda](const Vec& x) {
                 const EuclideanJet2 p = phi.jet(x);
                 const EuclideanJet2 gj = g.jet(x);
                 return EuclideanJet2{lambda * p.value + gj.value, lambda * p.gradient + gj.gradient,
                                      lambda * p.hessian + gj.hessian};
             }};
    out.max_lambda_max = -std::numeric_limits<double>::infinity();
    for (const Vec& x : all) {
        out.max_lambda_max =
            std::max(out.max_lambda_max, lambda_max(horizontal_jet_exact(family, x, out.W.jet(x)).h_hessian));
    }
    out.certified = out.max_lambda_max <= options.tol;
    return out;
}

ExponentialSubsolution exponential_subsolution(const DomainSpec& domain, const FieldFamily& family,
                                               const Hamiltonian& h, double g_min, std::span<const Vec> samples,
                                               double mu_min, int max_doublings) {
    const int m = family.m();
    const double rho2_max = max_horizontal_radius_sq(domain, m, samples);
    ExponentialSubsolution out;
    double mu = mu_min;
    for (int d = 0; d <= max_doublings; ++d, mu *= 2.0) {
        const double shift = std::exp(0.5 * mu * rho2_max) - g_min;
        SmoothFunction v{[mu, shift, m](const Vec& x) { return std::exp(0.5 * mu * x.head(m).squaredNorm()) - shift; },
                         [mu, shift, m](const Vec& x) {
                             EuclideanJet2 j = exp_jet(x, mu, m);
                             j.value -= shift;
                             return j;
                         }};
        bool ok = true;
        for (const Vec& x : samples) {
            const HorizontalJet j = horizontal_jet_exact(family, x, v.jet(x));
            if (ma_residual(OperatorForm::det, x, j.value, j, h) > 0.0) {
                ok = false;
                break;
            }
        }
        out.v = v;
        out.mu = mu;
        out.shift = shift;
        out.certified = ok;
        if (ok) break;
    }
    return out;
}

}  // namespace carnot_ma
