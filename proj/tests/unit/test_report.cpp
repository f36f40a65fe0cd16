#include "carnot_ma/config.hpp"
#include "carnot_ma/report.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace carnot_ma;
using nlohmann::json;

namespace {

ProblemSpec koranyi_spec() {
    return load_problem(std::string(CARNOT_MA_SOURCE_DIR) + "/configs/koranyi_ball_MAHeis.cfg");
}

}  // namespace

TEST(Report, SolveReportCarriesSchemaAndFields) {
    SolveReport r;
    r.iterations = 12;
    r.converged = true;
    r.oracle_error = 0.25;
    r.final_max_residual = INFINITY;
    r.characteristic_points = {Vec::Unit(3, 2)};
    const ProblemSpec spec = koranyi_spec();
    const json j = json::parse(solve_report_json(r, &spec));
    EXPECT_EQ(j.at("schema_version"), report_schema_version);
    EXPECT_EQ(j.at("kind"), "solve");
    EXPECT_EQ(j.at("iterations"), 12);
    EXPECT_EQ(j.at("converged"), true);
    EXPECT_DOUBLE_EQ(j.at("oracle_error").get<double>(), 0.25);
    EXPECT_TRUE(j.at("final_max_residual").is_null());
    EXPECT_EQ(j.at("characteristic_points").size(), 1u);
}

TEST(Report, SuiteReportAndTable) {
    SuiteResult s;
    s.suite = "demo";
    s.checks = {{"small", 1e-12, 1e-10, false}, {"large", 2.0, 1.0, false}};
    s.checks_run = 2;
    s.worst_margin = 2.0;
    s.pass = false;
    const json j = json::parse(suite_report_json({s}));
    EXPECT_EQ(j.at("schema_version"), report_schema_version);
    EXPECT_EQ(j.at("kind"), "suites");
    const std::string table = suite_table({s});
    EXPECT_NE(table.find("small"), std::string::npos);
    EXPECT_NE(table.find("FAIL"), std::string::npos);
}

TEST(Report, BarrierCharacteristicAndInfo) {
    const ProblemSpec spec = load_problem(std::string(CARNOT_MA_SOURCE_DIR) + "/configs/euclidean_ball.cfg");
    LowerBarrier lb;
    lb.accepted = true;
    UpperBarrier ub;
    ub.kind = UpperBarrierKind::zero;
    ub.certified = true;
    json j = json::parse(barrier_report_json(lb, ub, spec));
    EXPECT_EQ(j.at("schema_version"), report_schema_version);
    j = json::parse(characteristic_report_json({Vec::Unit(3, 2), -Vec::Unit(3, 2)}, spec));
    EXPECT_EQ(j.at("schema_version"), report_schema_version);

    const ProblemInfo info = inspect_problem(spec);
    EXPECT_TRUE(info.carnot_type);
    EXPECT_EQ(info.characteristic_points, 2u);
    EXPECT_GT(info.grid_nodes, 0u);
    EXPECT_NEAR(info.domain_gamma, 2.0, 0.05);
    j = json::parse(info_report_json(info, spec));
    EXPECT_EQ(j.at("kind"), "info");
}
