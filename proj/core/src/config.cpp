#include "carnot_ma/config.hpp"

#include "carnot_ma/constructions.hpp"
#include "carnot_ma/error.hpp"
#include "carnot_ma/expression.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <sstream>

namespace carnot_ma {

namespace {

using nlohmann::json;
namespace cc = config_codes;

class Source {
public:
    explicit Source(std::string_view text) : text_(text) {}

    /// Line of the last key of `path` found in document order (best effort).
    int line_of(std::initializer_list<std::string_view> path) const {
        std::size_t pos = 0;
        std::size_t found = std::string_view::npos;
        for (std::string_view key : path) {
            const std::string quoted = "\"" + std::string(key) + "\"";
            const std::size_t p = text_.find(quoted, pos);
            if (p == std::string_view::npos) break;
            found = p;
            pos = p + quoted.size();
        }
        if (found == std::string_view::npos) return 0;
        return line_at(found);
    }

    int line_at(std::size_t offset) const {
        int line = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) line += text_[i] == '\n' ? 1 : 0;
        return line;
    }

private:
    std::string_view text_;
};

struct Ctx {
    const Source& src;

    [[noreturn]] void fail(const char* code, const std::string& msg,
                           std::initializer_list<std::string_view> path) const {
        throw ConfigError(code, msg, src.line_of(path));
    }

    const json& section(const json& root, const char* key, const char* missing_code) const {
        if (!root.contains(key)) fail(missing_code, std::string("missing section '") + key + "'", {});
        const json& s = root.at(key);
        if (!s.is_object()) fail(cc::type, std::string("section '") + key + "' must be an object", {key});
        return s;
    }

    double number(const json& obj, const char* key, double fallback, std::initializer_list<std::string_view> path) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number()) fail(cc::type, std::string("'") + key + "' must be a number", path);
        return v.get<double>();
    }

    std::string string(const json& obj, const char* key, const std::string& fallback,
                       std::initializer_list<std::string_view> path) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_string()) fail(cc::type, std::string("'") + key + "' must be a string", path);
        return v.get<std::string>();
    }

    bool boolean(const json& obj, const char* key, bool fallback, std::initializer_list<std::string_view> path) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_boolean()) fail(cc::type, std::string("'") + key + "' must be true or false", path);
        return v.get<bool>();
    }

    Vec vector(const json& v, int n, const char* code, std::initializer_list<std::string_view> path) const {
        if (!v.is_array() || static_cast<int>(v.size()) != n) {
            fail(code, "expected an array of " + std::to_string(n) + " numbers", path);
        }
        Vec out(n);
        for (int i = 0; i < n; ++i) {
            if (!v[static_cast<std::size_t>(i)].is_number()) fail(code, "array entries must be numbers", path);
            out(i) = v[static_cast<std::size_t>(i)].get<double>();
        }
        return out;
    }
};

// Expression in x1..xn (t aliases xn) and optionally r.
struct XRExpression {
    Expression expr;
    int n = 0;

    double operator()(const Vec& x, double r) const {
        std::array<double, 17> slots{};
        for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = x(i);
        slots[static_cast<std::size_t>(n)] = r;
        return expr.evaluate(std::span<const double>(slots.data(), static_cast<std::size_t>(n + 1)));
    }
};

XRExpression parse_xr(const Ctx& ctx, const std::string& text, int n, const char* code,
                      std::initializer_list<std::string_view> path) {
    VariableSet vars = VariableSet::coordinates(n);
    vars.add("r");
    try {
        return {Expression::parse(text, vars), n};
    } catch (const ConfigError& e) {
        ctx.fail(code, e.what(), path);
    }
}

FieldFamily parse_fields(const Ctx& ctx, const json& f) {
    if (f.contains("custom")) {
        const json& c = f.at("custom");
        if (!c.is_object() || !c.contains("n") || !c.contains("m") || !c.contains("tau")) {
            ctx.fail(cc::fields_custom, "custom fields need n, m and tau", {"fields", "custom"});
        }
        const int n = static_cast<int>(ctx.number(c, "n", 0, {"fields", "n"}));
        const int m = static_cast<int>(ctx.number(c, "m", 0, {"fields", "m"}));
        if (n < 1 || n > 16 || m < 1 || m > n) ctx.fail(cc::fields_custom, "need 1 <= m <= n <= 16", {"fields", "custom"});
        const json& tau = c.at("tau");
        if (!tau.is_array() || static_cast<int>(tau.size()) != n - m) {
            ctx.fail(cc::fields_custom, "tau must have n - m rows", {"fields", "tau"});
        }
        std::vector<std::vector<std::string>> rows;
        for (const json& row : tau) {
            if (!row.is_array() || static_cast<int>(row.size()) != m) {
                ctx.fail(cc::fields_custom, "each tau row must have m entries", {"fields", "tau"});
            }
            std::vector<std::string> r;
            for (const json& e : row) {
                if (e.is_number()) {
                    std::ostringstream os;
                    os.precision(17);
                    os << e.get<double>();
                    r.push_back(os.str());
                } else if (e.is_string()) {
                    r.push_back(e.get<std::string>());
                } else {
                    ctx.fail(cc::fields_custom, "tau entries must be expressions", {"fields", "tau"});
                }
            }
            rows.push_back(std::move(r));
        }
        const std::string smooth = ctx.string(c, "smoothness", "c2", {"fields", "smoothness"});
        if (smooth != "c2" && smooth != "c11") ctx.fail(cc::fields_custom, "smoothness must be c2 or c11", {"fields", "smoothness"});
        try {
            return carnot_family_from_expressions(n, m, rows, smooth == "c2" ? Smoothness::c2 : Smoothness::c11);
        } catch (const ConfigError& e) {
            ctx.fail(cc::fields_custom, e.what(), {"fields", "tau"});
        }
    }
    const std::string preset = ctx.string(f, "preset", "", {"fields", "preset"});
    if (preset == "heisenberg1") return FieldFamily::heisenberg(1);
    if (preset == "heisenberg") {
        const int j = static_cast<int>(ctx.number(f, "j", 1, {"fields", "j"}));
        if (j < 1 || j > 7) ctx.fail(cc::fields_preset, "heisenberg j must be in 1..7", {"fields", "j"});
        return FieldFamily::heisenberg(j);
    }
    if (preset == "euclidean") {
        const int n = static_cast<int>(ctx.number(f, "n", 3, {"fields", "n"}));
        if (n < 1 || n > 16) ctx.fail(cc::fields_preset, "euclidean n must be in 1..16", {"fields", "n"});
        return FieldFamily::euclidean(n);
    }
    ctx.fail(cc::fields_preset, "unknown fields preset '" + preset + "'", {"fields", "preset"});
}

DomainSpec parse_domain(const Ctx& ctx, const json& d, const FieldFamily& family) {
    const int n = family.n();
    if (d.contains("custom")) {
        const json& c = d.at("custom");
        if (!c.is_object() || !c.contains("phi") || !c.contains("box")) {
            ctx.fail(cc::domain_custom, "custom domain needs phi and box", {"domain", "custom"});
        }
        const std::string phi = ctx.string(c, "phi", "", {"domain", "phi"});
        const json& box = c.at("box");
        if (!box.is_object() || !box.contains("lo") || !box.contains("hi")) {
            ctx.fail(cc::domain_custom, "box needs lo and hi", {"domain", "box"});
        }
        Box b{ctx.vector(box.at("lo"), n, cc::domain_dimension, {"domain", "lo"}),
              ctx.vector(box.at("hi"), n, cc::domain_dimension, {"domain", "hi"})};
        if ((b.hi - b.lo).minCoeff() <= 0.0) ctx.fail(cc::domain_custom, "box must have hi > lo", {"domain", "box"});
        const Vec center = c.contains("center") ? ctx.vector(c.at("center"), n, cc::domain_dimension, {"domain", "center"})
                                                : Vec(0.5 * (b.lo + b.hi));
        try {
            const ExpressionField field = ExpressionField::parse(phi, n);
            return DomainSpec::custom(field.as_function(), b, center, "custom");
        } catch (const ConfigError& e) {
            ctx.fail(cc::domain_custom, e.what(), {"domain", "phi"});
        } catch (const InputError& e) {
            ctx.fail(cc::domain_custom, e.what(), {"domain", "center"});
        }
    }
    const std::string preset = ctx.string(d, "preset", "", {"domain", "preset"});
    const double R = ctx.number(d, "R", 1.0, {"domain", "R"});
    if (!(R > 0.0)) ctx.fail(cc::domain_radius, "radius R must be positive", {"domain", "R"});
    if (preset == "koranyi_ball") {
        if (n % 2 == 0 || n < 3) ctx.fail(cc::domain_dimension, "koranyi_ball needs n = 2j + 1", {"domain", "preset"});
        return DomainSpec::koranyi_ball(R, (n - 1) / 2);
    }
    if (preset == "euclidean_ball") {
        const Vec center = d.contains("center") ? ctx.vector(d.at("center"), n, cc::domain_dimension, {"domain", "center"})
                                                : Vec(Vec::Zero(n));
        return DomainSpec::euclidean_ball(R, center);
    }
    ctx.fail(cc::domain_preset, "unknown domain preset '" + preset + "'", {"domain", "preset"});
}

Hamiltonian parse_hamiltonian(const Ctx& ctx, const json& h, const FieldFamily& family, std::string* summary) {
    const int n = family.n();
    const int m = family.m();
    const std::string kind = ctx.string(h, "kind", "", {"hamiltonian", "kind"});
    auto expr = [&](const char* key, const char* fallback) {
        const std::string text = ctx.string(h, key, fallback, {"hamiltonian", key});
        if (text.empty()) ctx.fail(cc::hamiltonian_param, std::string("missing '") + key + "'", {"hamiltonian", "kind"});
        return std::pair{parse_xr(ctx, text, n, cc::hamiltonian_expression, {"hamiltonian", key}), text};
    };
    std::optional<Hamiltonian> out;
    if (kind == "source_term") {
        auto [f, text] = expr("f", "");
        out = Hamiltonian::source_term([f](const Vec& x) { return f(x, 0.0); });
        *summary = "source_term f = " + text;
    } else if (kind == "separable") {
        auto [k, text] = expr("k", "");
        const double alpha = ctx.number(h, "alpha", 0.0, {"hamiltonian", "alpha"});
        if (!(alpha >= 0.0)) ctx.fail(cc::hamiltonian_param, "alpha must be >= 0", {"hamiltonian", "alpha"});
        out = Hamiltonian::separable([k](const Vec& x, double r) { return k(x, r); }, alpha);
        *summary = "separable k = " + text + ", alpha = " + std::to_string(alpha);
    } else if (kind == "gauss") {
        auto [k, text] = expr("k", "");
        out = Hamiltonian::gauss([k](const Vec& x, double r) { return k(x, r); }, m);
        *summary = "gauss k = " + text;
    } else if (kind == "transport") {
        auto [f, text] = expr("f", "");
        const double alpha = ctx.number(h, "alpha", 0.0, {"hamiltonian", "alpha"});
        out = Hamiltonian::transport_power([f](const Vec& x) { return f(x, 0.0); }, alpha);
        *summary = "transport f = " + text + ", |q|^" + std::to_string(alpha);
    } else if (kind == "constant") {
        const double c = ctx.number(h, "c", 0.0, {"hamiltonian", "c"});
        if (!(c >= 0.0)) ctx.fail(cc::hamiltonian_param, "constant H must be >= 0", {"hamiltonian", "c"});
        out = Hamiltonian::constant(c);
        *summary = "constant " + std::to_string(c);
    } else {
        ctx.fail(cc::hamiltonian_kind, "unknown hamiltonian kind '" + kind + "'", {"hamiltonian", "kind"});
    }
    if (h.contains("growth")) {
        const json& g = h.at("growth");
        if (!g.is_object()) ctx.fail(cc::hamiltonian_param, "growth must be an object", {"hamiltonian", "growth"});
        GrowthBound b{ctx.number(g, "L", 0.0, {"hamiltonian", "growth", "L"}),
                      ctx.number(g, "M", 0.0, {"hamiltonian", "growth", "M"}),
                      ctx.number(g, "R", 0.0, {"hamiltonian", "growth", "R"})};
        if (b.L < 0.0 || b.M < 0.0) ctx.fail(cc::hamiltonian_param, "growth constants must be >= 0", {"hamiltonian", "growth"});
        out->with_growth(b);
    }
    return *out;
}

BoundaryData parse_boundary(const Ctx& ctx, const json& b, int n, std::string* summary) {
    if (b.contains("g")) {
        const json& gv = b.at("g");
        std::string text;
        if (gv.is_number()) {
            std::ostringstream os;
            os.precision(17);
            os << gv.get<double>();
            text = os.str();
        } else if (gv.is_string()) {
            text = gv.get<std::string>();
        } else {
            ctx.fail(cc::boundary_expression, "g must be an expression", {"boundary", "g"});
        }
        try {
            const ExpressionField field = ExpressionField::parse(text, n);
            *summary = "g = " + text;
            return BoundaryData::from_smooth(field.as_function());
        } catch (const ConfigError& e) {
            ctx.fail(cc::boundary_expression, e.what(), {"boundary", "g"});
        }
    }
    if (b.contains("samples")) {
        const json& s = b.at("samples");
        if (!s.is_array() || s.empty()) ctx.fail(cc::boundary_samples, "samples must be a nonempty array", {"boundary", "samples"});
        std::vector<Vec> pts;
        std::vector<double> vals;
        for (const json& row : s) {
            const Vec v = ctx.vector(row, n + 1, cc::boundary_samples, {"boundary", "samples"});
            pts.push_back(v.head(n));
            vals.push_back(v(n));
        }
        const double tol = ctx.number(b, "tol_g", 1e-6, {"boundary", "tol_g"});
        const int deg = static_cast<int>(ctx.number(b, "max_degree", 10, {"boundary", "max_degree"}));
        if (!(tol > 0.0) || deg < 0) ctx.fail(cc::boundary_samples, "tol_g must be > 0 and max_degree >= 0", {"boundary", "tol_g"});
        BoundaryData bd = BoundaryData::from_samples(pts, vals, tol, deg);
        *summary = std::to_string(pts.size()) + " samples, polynomial degree " + std::to_string(bd.fit_degree) +
                   ", fit error " + std::to_string(bd.fit_error);
        return bd;
    }
    ctx.fail(cc::boundary_missing, "boundary needs 'g' or 'samples'", {"boundary"});
}

}  // namespace

ProblemSpec parse_problem(std::string_view text) {
    const Source src(text);
    const Ctx ctx{src};
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(cc::syntax, std::string("invalid JSON: ") + e.what(), src.line_at(e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!root.is_object()) throw ConfigError(cc::not_object, "configuration must be a JSON object", 1);
    if (root.contains("schema_version")) {
        const json& v = root.at("schema_version");
        if (!v.is_number_integer() || v.get<int>() != 1) {
            ctx.fail(cc::schema_version, "unsupported schema_version (expected 1)", {"schema_version"});
        }
    }

    FieldFamily family = parse_fields(ctx, ctx.section(root, "fields", cc::fields_missing));
    DomainSpec domain = parse_domain(ctx, ctx.section(root, "domain", cc::domain_missing), family);
    std::string h_summary;
    Hamiltonian h = parse_hamiltonian(ctx, ctx.section(root, "hamiltonian", cc::hamiltonian_missing), family, &h_summary);
    std::string b_summary;
    BoundaryData boundary =
        parse_boundary(ctx, ctx.section(root, "boundary", cc::boundary_missing), family.n(), &b_summary);

    GridOptions grid;
    if (root.contains("grid")) {
        const json& g = ctx.section(root, "grid", cc::grid_h);
        grid.h = ctx.number(g, "h", grid.h, {"grid", "h"});
        if (!(grid.h > 0.0)) ctx.fail(cc::grid_h, "grid spacing h must be positive", {"grid", "h"});
        grid.anisotropic_t = ctx.boolean(g, "anisotropic_t", false, {"grid", "anisotropic_t"});
        grid.frames_K = static_cast<int>(ctx.number(g, "frames_K", grid.frames_K, {"grid", "frames_K"}));
        if (grid.frames_K < 1) ctx.fail(cc::grid_frames, "frames_K must be >= 1", {"grid", "frames_K"});
        grid.random_frames = static_cast<int>(ctx.number(g, "random_frames", grid.random_frames, {"grid", "random_frames"}));
        if (grid.random_frames < 1) ctx.fail(cc::grid_frames, "random_frames must be >= 1", {"grid", "random_frames"});
        grid.reach_factor = ctx.number(g, "reach_factor", grid.reach_factor, {"grid", "reach_factor"});
        grid.reach = ctx.number(g, "reach", 0.0, {"grid", "reach"});
        if (!(grid.reach_factor > 0.0) || grid.reach < 0.0) {
            ctx.fail(cc::grid_reach, "reach_factor must be > 0 and reach >= 0", {"grid", "reach_factor"});
        }
    }

    SolverOptions solver;
    if (root.contains("solver")) {
        const json& s = ctx.section(root, "solver", cc::solver_mode);
        const std::string mode = ctx.string(s, "mode", "gauss_seidel", {"solver", "mode"});
        if (mode == "gauss_seidel") {
            solver.mode = SweepMode::gauss_seidel;
        } else if (mode == "jacobi") {
            solver.mode = SweepMode::jacobi;
        } else {
            ctx.fail(cc::solver_mode, "mode must be jacobi or gauss_seidel", {"solver", "mode"});
        }
        solver.tol_update = ctx.number(s, "tol_update", solver.tol_update, {"solver", "tol_update"});
        solver.tol_res = ctx.number(s, "tol_res", solver.tol_res, {"solver", "tol_res"});
        if (!(solver.tol_update > 0.0) || !(solver.tol_res > 0.0)) {
            ctx.fail(cc::solver_tolerance, "tolerances must be positive", {"solver", "tol_update"});
        }
        const double iters = ctx.number(s, "max_iters", solver.max_iters, {"solver", "max_iters"});
        if (!(iters >= 1.0)) ctx.fail(cc::solver_iterations, "max_iters must be >= 1", {"solver", "max_iters"});
        solver.max_iters = static_cast<int>(iters);
        const double threads = ctx.number(s, "threads", 1, {"solver", "threads"});
        if (!(threads >= 1.0)) ctx.fail(cc::solver_threads, "threads must be >= 1", {"solver", "threads"});
        solver.threads = static_cast<int>(threads);
        const std::string start = ctx.string(s, "start", "automatic", {"solver", "start"});
        if (start == "automatic") {
            solver.start = StartKind::automatic;
        } else if (start == "constant") {
            solver.start = StartKind::constant;
        } else if (start == "lower_barrier") {
            solver.start = StartKind::lower_barrier;
        } else if (start == "exponential") {
            solver.start = StartKind::exponential;
        } else if (start == "oracle") {
            solver.start = StartKind::user;
        } else {
            ctx.fail(cc::solver_start, "unknown start '" + start + "'", {"solver", "start"});
        }
        const std::string grad = ctx.string(s, "gradient", "automatic", {"solver", "gradient"});
        if (grad == "automatic") {
            solver.gradient = GradientMode::automatic;
        } else if (grad == "upwind") {
            solver.gradient = GradientMode::upwind;
        } else if (grad == "centered") {
            solver.gradient = GradientMode::centered;
        } else {
            ctx.fail(cc::solver_mode, "gradient must be automatic, upwind or centered", {"solver", "gradient"});
        }
    }

    OutputSpec outputs;
    std::optional<ScalarField> oracle;
    if (root.contains("outputs")) {
        const json& o = ctx.section(root, "outputs", cc::outputs_oracle);
        outputs.grid_csv = ctx.string(o, "grid_csv", "", {"outputs", "grid_csv"});
        outputs.report = ctx.string(o, "report", "", {"outputs", "report"});
        if (o.contains("oracle") && !o.at("oracle").is_null()) {
            const std::string name = ctx.string(o, "oracle", "", {"outputs", "oracle"});
            if (name != "w_quartic" || family.name() != "heisenberg1") {
                ctx.fail(cc::outputs_oracle, "oracle must be w_quartic on the heisenberg1 family", {"outputs", "oracle"});
            }
            outputs.oracle = name;
            oracle = explicit_heisenberg_oracle(HeisenbergOracle::w_quartic).value;
        }
    }
    if (solver.start == StartKind::user && !oracle) {
        ctx.fail(cc::solver_start, "start 'oracle' needs outputs.oracle", {"solver", "start"});
    }

    ProblemSpec spec{DirichletProblem{family, domain, h, boundary, grid, solver, oracle,
                                      solver.start == StartKind::user ? oracle : std::nullopt},
                     outputs,
                     family.name() + " (n = " + std::to_string(family.n()) + ", m = " + std::to_string(family.m()) + ")",
                     domain.name(),
                     h_summary,
                     b_summary};
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

}  // namespace carnot_ma
