// Acceptance run: one pass/fail line per criterion. Exit status is the number
// of failed criteria.

#include "carnot_ma/diagnostics.hpp"
#include "carnot_ma/oracle_harness.hpp"
#include "carnot_ma/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace carnot_ma;

namespace {

int failures = 0;

void line(int id, const char* title, bool pass, const std::string& detail) {
    std::printf("criterion %2d %-28s %s  %s\n", id, title, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// All checks of `r` whose name starts with one of `prefixes`.
bool group(const SuiteResult& r, std::initializer_list<const char*> prefixes, double* worst) {
    bool pass = true;
    bool any = false;
    *worst = 0.0;
    for (const SuiteCheck& c : r.checks) {
        const bool match = std::any_of(prefixes.begin(), prefixes.end(),
                                       [&](const char* p) { return c.name.rfind(p, 0) == 0; });
        if (!match) continue;
        any = true;
        pass = pass && c.pass();
        *worst = std::max(*worst, c.margin());
        if (!c.pass()) std::printf("    failed check %s: %.6g (limit %.6g)\n", c.name.c_str(), c.value, c.limit);
    }
    return pass && any;
}

const SuiteCheck* find(const SuiteResult& r, const std::string& name) {
    for (const SuiteCheck& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool same_set(const std::vector<Vec>& got, const std::vector<Vec>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (const Vec& w : want) {
        const bool hit = std::any_of(got.begin(), got.end(), [&](const Vec& g) { return (g - w).norm() <= tol; });
        if (!hit) return false;
    }
    return true;
}

}  // namespace

int main() {
    const SuiteResult ident = run_suite("identities");
    {
        double worst = 0.0;
        const bool pass = group(ident,
                                {"horizontal_gradient_of_w", "horizontal_hessian_of_w", "gradient_norm_of_w",
                                 "gauss_curvature_of_w", "ma_heis_residual", "gauss_heis_residual"},
                                &worst) &&
                          ident.seconds < 1.0;
        line(1, "closed-form identities", pass,
             fmt("worst margin %.3g of tolerance (1e-10 jets, 1e-9 residuals), %.3f s < 1 s", worst, ident.seconds));
    }

    {
        const SuiteResult conv = run_suite("convexity");
        double worst = 0.0;
        const bool pass = group(conv, {"norm_"}, &worst);
        line(2, "homogeneous norm oracle", pass, fmt("worst margin %.3g of 1e-10 over 1000 points", worst));
    }

    {
        const SuiteResult rep = run_suite("representations");
        double worst = 0.0;
        const bool pass = group(rep, {"detroot_", "logdet_"}, &worst);
        line(3, "representation formulas", pass,
             fmt("worst margin %.3g of 1e-10 (1000 SPD matrices, 10^4 competitors)", worst));
    }

    {
        const SuiteResult ineq = run_suite("inequalities");
        double worst = 0.0;
        const bool pass = group(ineq, {""}, &worst);
        line(4, "matrix inequalities", pass, fmt("10^4 trials each, %.0f checks with zero violations at 1e-10",
                                                 static_cast<double>(ineq.checks.size())));
    }

    {
        const SuiteCheck* c = find(ident, "fd_jet_order");
        const bool pass = c && c->pass();
        line(5, "finite-difference order", pass,
             fmt("observed order %.3f >= 1.8 over h = 0.1, 0.05, 0.025", c ? c->value : NAN));
    }

    const SuiteResult cons = run_suite("constructions");
    {
        double worst = 0.0;
        const bool pass = group(cons, {"strict."}, &worst);
        const SuiteCheck* slope = find(cons, "strict.linear_in_epsilon");
        const SuiteCheck* alpha = find(cons, "strict.alpha_positive");
        line(6, "strict subsolution", pass,
             fmt("alpha %.3g > 0, |log-slope - 1| = %.2g <= 0.05", alpha ? alpha->value : NAN,
                 slope ? slope->value : NAN));
    }
    {
        double worst = 0.0;
        const bool pass = group(cons, {"barrier."}, &worst);
        const SuiteCheck* res = find(cons, "barrier.subsolution");
        const SuiteCheck* gap = find(cons, "barrier.boundary_values");
        line(7, "lower barrier", pass,
             fmt("residual %.3g <= 1e-8, boundary gap %.3g <= 1e-12, gauss rejected", res ? res->value : NAN,
                 gap ? gap->value : NAN));
    }

    {
        const double hs[3] = {0.2, 0.1, 0.05};
        double err[3] = {NAN, NAN, NAN};
        std::size_t violations = 0;
        bool converged = true;
        double seconds_fine = 0.0;
        for (int l = 0; l < 3; ++l) {
            const SolveResult r = solve_dirichlet(koranyi_maheis_problem(hs[l]));
            err[l] = r.report.oracle_error.value_or(NAN);
            violations += r.report.monotonicity_violations;
            converged = converged && r.report.converged;
            if (l == 2) seconds_fine = r.report.seconds;
            std::printf("    h = %.3f  error %.6f  iterations %d  start %s  violations %zu  %.1f s\n", hs[l], err[l],
                        r.report.iterations, to_string(r.report.start_used).c_str(), r.report.monotonicity_violations,
                        r.report.seconds);
        }
        const bool monotone = err[0] > err[1] && err[1] > err[2];
        const bool halved = err[2] <= 0.5 * err[0];
        const bool pass = monotone && halved && violations == 0 && converged && seconds_fine < 600.0;
        line(8, "solver vs oracle", pass,
             fmt("errors %.4f > %.4f > %.4f, ratio %.3f <= 0.5", err[0], err[1], err[2], err[2] / err[0]) +
                 ", violations " + std::to_string(violations) + fmt(", %.1f s at h = 0.05", seconds_fine));
    }

    {
        const SuiteResult cmp = run_suite("comparison");
        double worst = 0.0;
        const bool pass = group(cmp, {"pair_"}, &worst) && cmp.checks.size() == 20;
        line(9, "discrete comparison", pass,
             fmt("20 pairs at h = 0.1, tol_cmp = 2 x measured error, worst margin %.3g", worst));
    }

    {
        const FieldFamily heis = FieldFamily::heisenberg(1);
        const DomainSpec kb = DomainSpec::koranyi_ball(1.0, 1);
        const DomainSpec eb = DomainSpec::euclidean_ball(1.0, Vec::Zero(3));
        Vec north(3), south(3);
        north << 0.0, 0.0, 1.0;
        south << 0.0, 0.0, -1.0;
        const std::vector<Vec> poles{north, south};
        const auto k_pts = characteristic_points(kb, heis, kb.boundary_samples(400, 29));
        const auto e_pts = characteristic_points(eb, heis, eb.boundary_samples(400, 29));
        const auto flat = characteristic_points(eb, FieldFamily::euclidean(3), eb.boundary_samples(400, 29));
        const bool pass = same_set(k_pts, poles, 1e-8) && same_set(e_pts, poles, 1e-8) && flat.empty();
        line(10, "characteristic detector", pass,
             fmt("gauge ball %.0f points, euclidean ball %.0f points, euclidean fields %.0f points (tol 1e-8)",
                 static_cast<double>(k_pts.size()), static_cast<double>(e_pts.size()),
                 static_cast<double>(flat.size())));
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
