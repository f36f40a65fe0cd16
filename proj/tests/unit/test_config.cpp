#include "carnot_ma/config.hpp"
#include "carnot_ma/error.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>

using namespace carnot_ma;
namespace cc = carnot_ma::config_codes;

namespace {

const std::string kBase = R"({
  "schema_version": 1,
  "fields": {
    "preset": "heisenberg1"
  },
  "domain": {
    "preset": "koranyi_ball",
    "R": 1.0
  },
  "hamiltonian": {
    "kind": "source_term",
    "f": "144*(x1^2 + x2^2)^2"
  },
  "boundary": {
    "g": "1"
  },
  "grid": {
    "h": 0.2,
    "frames_K": 8
  },
  "solver": {
    "mode": "gauss_seidel",
    "tol_update": 1e-8,
    "max_iters": 1000,
    "threads": 1,
    "start": "automatic"
  },
  "outputs": {
    "grid_csv": "u.csv",
    "report": "u.json",
    "oracle": "w_quartic"
  }
})";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const std::size_t at = text.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    text.replace(at, from.size(), to);
    return text;
}

int line_of(const std::string& text, const std::string& needle) {
    const std::size_t at = text.find(needle);
    int line = 1;
    for (std::size_t i = 0; i < at && i < text.size(); ++i) line += text[i] == '\n';
    return line;
}

struct Case {
    std::string from;
    std::string to;
    std::string code;
    std::string line_marker;  // text on the offending line
};

}  // namespace

TEST(Config, ParsesTheBaseConfiguration) {
    const ProblemSpec s = parse_problem(kBase);
    EXPECT_EQ(s.problem.family.n(), 3);
    EXPECT_EQ(s.problem.family.m(), 2);
    EXPECT_EQ(s.problem.domain.name(), "koranyi_ball");
    EXPECT_DOUBLE_EQ(s.problem.grid.h, 0.2);
    EXPECT_EQ(s.problem.grid.frames_K, 8);
    EXPECT_EQ(s.problem.solver.mode, SweepMode::gauss_seidel);
    EXPECT_EQ(s.problem.solver.max_iters, 1000);
    EXPECT_EQ(s.outputs.grid_csv, "u.csv");
    ASSERT_TRUE(s.outputs.oracle.has_value());
    ASSERT_TRUE(s.problem.oracle.has_value());
    Vec x(3);
    x << 0.5, 0.0, 0.0;
    EXPECT_NEAR(s.problem.hamiltonian(x, 0.0, Vec::Zero(2)), 144 * 0.0625, 1e-12);
    EXPECT_NEAR(s.problem.boundary.g(x), 1.0, 0.0);
    EXPECT_NEAR((*s.problem.oracle)(x), 0.0625, 1e-15);
}

TEST(Config, EachFailureHasADistinctCodeAndItsLine) {
    const std::vector<Case> cases = {
        {R"("schema_version": 1)", R"("schema_version": 2)", cc::schema_version, "schema_version"},
        {R"("preset": "heisenberg1")", R"("preset": "heisenburg")", cc::fields_preset, "heisenburg"},
        {R"("preset": "heisenberg1")", R"("custom": {"n": 3, "m": 2, "tau": [[1]]})", cc::fields_custom, "custom"},
        {R"("preset": "koranyi_ball")", R"("preset": "square")", cc::domain_preset, "square"},
        {R"("R": 1.0)", R"("R": -1.0)", cc::domain_radius, "\"R\""},
        {R"("preset": "heisenberg1")", R"("preset": "euclidean", "n": 2)", cc::domain_dimension, "koranyi_ball"},
        {R"("kind": "source_term")", R"("kind": "quadratic")", cc::hamiltonian_kind, "quadratic"},
        {R"("f": "144*(x1^2 + x2^2)^2")", R"("f": "144*(x1^2 + ")", cc::hamiltonian_expression, "\"f\""},
        {R"("g": "1")", R"("g": "sin(")", cc::boundary_expression, "\"g\""},
        {R"("g": "1")", R"("samples": [])", cc::boundary_samples, "samples"},
        {R"("h": 0.2)", R"("h": -0.2)", cc::grid_h, "\"h\""},
        {R"("frames_K": 8)", R"("frames_K": 0)", cc::grid_frames, "frames_K"},
        {R"("frames_K": 8)", R"("reach_factor": -1)", cc::grid_reach, "reach_factor"},
        {R"("mode": "gauss_seidel")", R"("mode": "sor")", cc::solver_mode, "sor"},
        {R"("tol_update": 1e-8)", R"("tol_update": 0)", cc::solver_tolerance, "tol_update"},
        {R"("max_iters": 1000)", R"("max_iters": 0)", cc::solver_iterations, "max_iters"},
        {R"("threads": 1)", R"("threads": 0)", cc::solver_threads, "threads"},
        {R"("start": "automatic")", R"("start": "random")", cc::solver_start, "random"},
        {R"("oracle": "w_quartic")", R"("oracle": "sphere")", cc::outputs_oracle, "sphere"},
        {R"("max_iters": 1000)", R"("max_iters": "many")", cc::type, "max_iters"},
    };
    std::set<std::string> codes;
    for (const Case& c : cases) {
        const std::string text = replace(kBase, c.from, c.to);
        try {
            parse_problem(text);
            ADD_FAILURE() << "accepted: " << c.to;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.code(), c.code) << c.to << ": " << e.what();
            EXPECT_EQ(e.line(), line_of(text, c.line_marker)) << c.to << ": " << e.what();
            EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
        }
        codes.insert(c.code);
    }
    EXPECT_EQ(codes.size(), cases.size());
}

TEST(Config, MissingSectionsAndSyntax) {
    const auto code_of = [](const std::string& text) {
        try {
            parse_problem(text);
        } catch (const ConfigError& e) {
            return e.code();
        }
        return std::string("accepted");
    };
    EXPECT_EQ(code_of("{ \"fields\": "), cc::syntax);
    EXPECT_EQ(code_of("[1, 2]"), cc::not_object);
    EXPECT_EQ(code_of("{}"), cc::fields_missing);
    EXPECT_EQ(code_of(R"({"fields": {"preset": "heisenberg1"}})"), cc::domain_missing);
    EXPECT_EQ(code_of(R"({"fields": {"preset": "heisenberg1"}, "domain": {"preset": "koranyi_ball", "R": 1}})"),
              cc::hamiltonian_missing);
    EXPECT_EQ(code_of(R"({"fields": {"preset": "heisenberg1"}, "domain": {"preset": "koranyi_ball", "R": 1},
                         "hamiltonian": {"kind": "constant", "c": 1}})"),
              cc::boundary_missing);
}

TEST(Config, SyntaxErrorReportsItsLine) {
    const std::string text = "{\n  \"fields\": {\n    \"preset\": \"heisenberg1\",,\n  }\n}";
    try {
        parse_problem(text);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.code(), cc::syntax);
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Config, OracleStartNeedsAnOracle) {
    std::string text = replace(kBase, R"("start": "automatic")", R"("start": "oracle")");
    EXPECT_EQ(parse_problem(text).problem.solver.start, StartKind::user);
    text = replace(text, R"(,
    "oracle": "w_quartic")", "");
    EXPECT_THROW(parse_problem(text), ConfigError);
}

TEST(Config, OtherHamiltoniansAndPresets) {
    std::string text = replace(kBase, R"("kind": "source_term",
    "f": "144*(x1^2 + x2^2)^2")", R"("kind": "gauss", "k": "1 + r^2")");
    const ProblemSpec g = parse_problem(text);
    EXPECT_EQ(g.problem.hamiltonian.kind(), HamiltonianKind::gauss);
    Vec q(2);
    q << 1.0, 0.0;
    EXPECT_NEAR(g.problem.hamiltonian(Vec::Zero(3), 1.0, q), 2.0 * 4.0, 1e-12);  // (1 + r^2)(1 + |q|^2)^2

    text = replace(kBase, R"("preset": "heisenberg1")", R"("preset": "heisenberg", "j": 2)");
    EXPECT_THROW(parse_problem(text), ConfigError);  // koranyi_ball is fine but the oracle needs H^1
    text = replace(text, R"(,
    "oracle": "w_quartic")", "");
    EXPECT_EQ(parse_problem(text).problem.family.n(), 5);
}

TEST(Config, BoundarySamples) {
    const std::string text = replace(kBase, R"("g": "1")",
                                     R"("samples": [[1, 0, 0, 1], [0, 1, 0, 1], [-1, 0, 0, 1], [0, 0, 1, 1]], "tol_g": 1e-9)");
    const ProblemSpec s = parse_problem(text);
    EXPECT_EQ(s.problem.boundary.fit_degree, 0);
    EXPECT_NEAR(s.problem.boundary.g(Vec::Zero(3)), 1.0, 1e-12);
}

TEST(Config, ShippedConfigurationsParse) {
    for (const char* name : {"koranyi_ball_MAHeis.cfg", "euclidean_ball.cfg", "gauss_curvature.cfg", "euclidean_plane.cfg"}) {
        EXPECT_NO_THROW(load_problem(std::string(CARNOT_MA_SOURCE_DIR) + "/configs/" + name)) << name;
    }
    EXPECT_THROW(load_problem("/nonexistent/problem.cfg"), InputError);
}
