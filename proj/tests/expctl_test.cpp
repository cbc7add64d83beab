#include "sars/errors.hpp"
#include "sars/scenario.hpp"
#include "sars/sweep.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace sars;
using namespace sars::expctl;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("sars_expctl_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario small(std::vector<tsp::TspKind> tsps, std::vector<rsp::RspKind> rsps, std::vector<bool> pora, int seeds) {
    auto s = default_scenario();
    s.policies.tsps = std::move(tsps);
    s.policies.rsps = std::move(rsps);
    s.policies.pora = std::move(pora);
    s.seeds.count = seeds;
    return s;
}

} // namespace

TEST(Scenario, EmptyConfigGivesDefaults) {
    EXPECT_EQ(parse_scenario(""), default_scenario());
    EXPECT_EQ(parse_scenario("{}"), default_scenario());
    const auto s = default_scenario();
    EXPECT_DOUBLE_EQ(s.area_width_km, 0.7);
    EXPECT_DOUBLE_EQ(s.area_height_km, 0.7);
    EXPECT_EQ(s.topology.vehicles, 4);
    EXPECT_EQ(s.topology.rsus, 2);
    EXPECT_EQ(s.topology.servers, 4);
    EXPECT_EQ(s.topology.min_pus, 8);
    EXPECT_EQ(s.topology.max_pus, 12);
    EXPECT_DOUBLE_EQ(s.topology.min_rate, 0.5);
    EXPECT_DOUBLE_EQ(s.topology.max_rate, 1.2);
    EXPECT_DOUBLE_EQ(s.topology.min_distance, 50.0);
    EXPECT_DOUBLE_EQ(s.topology.max_distance, 250.0);
    EXPECT_EQ(s.workload, workload::WorkloadPlan::defaults());
    EXPECT_EQ(s.policies.tsps.size(), 8u);
    EXPECT_EQ(s.policies.rsps.size(), 4u);
    EXPECT_DOUBLE_EQ(s.policies.beta, 0.5);
    EXPECT_EQ(s.policies.beta_sign, +1);
    EXPECT_EQ(s.policies.alphas, (std::vector<double>{1.0}));
    EXPECT_EQ(s.seeds.count, 30);
}

TEST(Scenario, ZeroRateIsAValidationError) {
    EXPECT_THROW(parse_scenario(R"({"topology":{"pu_rate":[0,1]}})"), ConfigError);
}

TEST(Scenario, RoundTrip) {
    auto s = default_scenario();
    s.policies.alphas = {0.5, 0.9, 1.5};
    s.policies.beta_sign = -1;
    s.policies.pora_k = 2;
    s.policies.tsp_params.covert_k = 3.0;
    s.workload.groups[2].count = 17;
    s.seeds = {100, 5};
    s.topology.broker_bandwidth = 250.0;
    EXPECT_EQ(parse_scenario(to_json(s)), s);

    const auto dir = scratch("roundtrip");
    std::ofstream(dir / "s.json") << to_json(s);
    EXPECT_EQ(load_scenario(dir / "s.json"), s);
}

TEST(Scenario, UnknownKeysAndBadTypes) {
    EXPECT_THROW(parse_scenario(R"({"topolgy":{}})"), ParseError);
    EXPECT_THROW(parse_scenario(R"({"topology":{"servers":"four"}})"), ParseError);
    EXPECT_THROW(parse_scenario(R"({"policies":{"tsp":["lifo"]}})"), ParseError);
    EXPECT_THROW(parse_scenario(R"({"policies":{"beta_sign":"up"}})"), ParseError);
    try {
        parse_scenario("{\n  \"policies\": {\n    \"tsp\": [\"edf\"\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_GT(e.line(), 1);
    }
}

TEST(Scenario, ValidationRules) {
    EXPECT_THROW(parse_scenario(R"({"policies":{"pora_k":12}})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"policies":{"tsp":[]}})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"topology":{"distance":[50,2000]}})"), ConfigError);
    EXPECT_THROW(parse_scenario(R"({"seeds":{"count":0}})"), ConfigError);
}

TEST(Scenario, MissingFileIsAnError) {
    EXPECT_ANY_THROW(load_scenario("/nonexistent/scenario.json"));
}

TEST(Cells, SixTspsTimesFourRsps) {
    auto s = small({tsp::TspKind::FCFS, tsp::TspKind::EDF, tsp::TspKind::EDD, tsp::TspKind::EFDF, tsp::TspKind::CR,
                    tsp::TspKind::COVERT},
                   {rsp::RspKind::ShortestExecution, rsp::RspKind::Random, rsp::RspKind::LatestFeasible,
                    rsp::RspKind::SARS},
                   {false}, 1);
    EXPECT_EQ(enumerate_cells(s).size(), 24u);
    s.policies.pora = {false, true};
    s.policies.alphas = {0.5, 1.0};
    EXPECT_EQ(enumerate_cells(s).size(), 6u * (3 + 4));
}

TEST(Cells, SameSeedSameInstance) {
    const auto s = default_scenario();
    const auto cells = enumerate_cells(s);
    const auto a = make_engine_config(s, cells.front(), 4);
    for (const auto& cell : cells) {
        const auto b = make_engine_config(s, cell, 4);
        ASSERT_EQ(a.tasks.size(), b.tasks.size());
        std::ostringstream ta, tb;
        workload::write_csv(ta, a.tasks);
        workload::write_csv(tb, b.tasks);
        EXPECT_EQ(ta.str(), tb.str());
        ASSERT_EQ(a.topology.pu_count(), b.topology.pu_count());
        for (std::size_t k = 0; k < a.topology.servers.size(); ++k) {
            EXPECT_EQ(a.topology.servers[k].broker_distance, b.topology.servers[k].broker_distance);
            for (std::size_t j = 0; j < a.topology.servers[k].pus.size(); ++j)
                EXPECT_EQ(a.topology.servers[k].pus[j].rate, b.topology.servers[k].pus[j].rate);
        }
    }
}

TEST(Sweep, WritesFilesInDeterministicOrder) {
    const auto s = small({tsp::TspKind::EDF, tsp::TspKind::COVERT},
                         {rsp::RspKind::Random, rsp::RspKind::LatestFeasible, rsp::RspKind::SARS}, {false, true}, 3);
    const auto d1 = scratch("sweep1");
    const auto d2 = scratch("sweep2");
    SweepOptions o1;
    o1.workers = 1;
    o1.debug = true;
    o1.traces = true;
    o1.out_dir = d1;
    SweepOptions o2 = o1;
    o2.workers = 4;
    o2.out_dir = d2;
    const auto r1 = run_sweep(s, o1);
    const auto r2 = run_sweep(s, o2);
    EXPECT_EQ(r1.violations, 0u);
    EXPECT_EQ(r1.runs.size(), 2u * 4 * 3);
    EXPECT_EQ(slurp(d1 / "metrics.csv"), slurp(d2 / "metrics.csv"));
    EXPECT_EQ(slurp(d1 / "summary.txt"), slurp(d2 / "summary.txt"));
    EXPECT_TRUE(std::filesystem::exists(d1 / "summary.txt"));
    int traces = 0;
    for (const auto& e : std::filesystem::directory_iterator(d1 / "traces")) traces += e.is_regular_file();
    EXPECT_EQ(traces, 24);
}

TEST(Sweep, SummaryDeltasMatchCellMeans) {
    const auto s = small({tsp::TspKind::CR}, {rsp::RspKind::ShortestExecution, rsp::RspKind::SARS}, {false}, 4);
    SweepOptions o;
    o.workers = 2;
    const auto r = run_sweep(s, o);
    std::map<std::string, double> sums;
    for (const auto& run : r.runs) sums[run.cell.label()] += run.metrics.tcr / 4.0;
    ASSERT_EQ(r.table.deltas.size(), 1u);
    const auto& d = r.table.deltas[0];
    EXPECT_NEAR(d.delta, sums[d.sars.label()] - sums[d.baseline.label()], 1e-9);
}

TEST(Sweep, ExternalTasksAreCheckedAgainstTheTopology) {
    const auto s = small({tsp::TspKind::EDF}, {rsp::RspKind::SARS}, {true}, 1);
    const auto cells = enumerate_cells(s);
    std::vector<Task> tasks{test::make_task(0, 0, 10, 1.0, 1.0, 99)};
    EXPECT_THROW(engine::run(make_engine_config(s, cells[0], 1, false, &tasks)), ConfigError);
}

TEST(Sweep, WorkerResolution) {
    EXPECT_EQ(resolve_workers(3), 3);
    setenv("SARS_WORKERS", "5", 1);
    EXPECT_EQ(resolve_workers(0), 5);
    unsetenv("SARS_WORKERS");
    EXPECT_GE(resolve_workers(0), 1);
}

TEST(Seeds, ConsecutiveFromBase) {
    SeedSet s{10, 3};
    EXPECT_EQ(s.seeds(), (std::vector<std::uint64_t>{10, 11, 12}));
    EXPECT_EQ(s.seeds(2), (std::vector<std::uint64_t>{10, 11}));
}
