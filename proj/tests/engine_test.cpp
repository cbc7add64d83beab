#include "sars/engine.hpp"
#include "sars/errors.hpp"
#include "sars/workload.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

using namespace sars;
using namespace sars::engine;
using sars::test::T;

namespace {

EngineConfig flat_config(std::vector<EdgeServer> servers, std::vector<Task> tasks) {
    EngineConfig c;
    c.topology = test::flat_topology(std::move(servers));
    c.tasks = std::move(tasks);
    c.debug = true;
    return c;
}

EngineConfig default_config(std::uint64_t seed, tsp::TspKind tsp, rsp::RspKind rsp, bool pora) {
    EngineConfig c;
    c.topology = generate_topology(TopologySpec{}, seed);
    c.tasks = workload::generate(workload::WorkloadPlan::defaults(), seed);
    c.tsp = tsp;
    c.rsp.kind = rsp;
    c.rsp.pora_enabled = pora;
    c.pora.enabled = pora;
    c.seed = seed;
    c.debug = true;
    return c;
}

const TaskOutcome& outcome(const SimulationReport& r, TaskId id) {
    for (const auto& o : r.outcomes)
        if (o.id == id) return o;
    throw std::out_of_range("no task");
}

const Task& task(const SimulationReport& r, TaskId id) {
    for (const auto& t : r.tasks)
        if (t.id == id) return t;
    throw std::out_of_range("no task");
}

int count_kind(const SimulationReport& r, EventKind kind, TaskId id) {
    return static_cast<int>(std::count_if(r.trace.begin(), r.trace.end(),
                                          [&](const Event& e) { return e.kind == kind && e.task == id; }));
}

} // namespace

TEST(Engine, SingleTaskOnIdlePu) {
    const auto report = run(flat_config({test::make_server(0, {0.5})}, {test::make_task(0, 2, 40, 5.0)}));
    EXPECT_TRUE(report.violations.empty());
    const auto& t = task(report, 0);
    ASSERT_EQ(t.state, TaskState::Completed);
    EXPECT_EQ(*t.completion, T(12));
    const auto& o = outcome(report, 0);
    EXPECT_EQ(o.delays.transmission, T(0));
    EXPECT_EQ(o.delays.broker_queue, T(0));
    EXPECT_EQ(o.delays.processing, T(10));
}

TEST(Engine, OffTickReleaseWaitsForTheNextDecision) {
    const auto report = run(flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 2.5, 40, 5.0)}));
    const auto& t = task(report, 0);
    const auto& o = outcome(report, 0);
    EXPECT_EQ(*t.broker_arrival, T(2.5));
    EXPECT_EQ(o.assignment, T(3));
    EXPECT_EQ(o.delays.broker_queue, T(0.5));
    EXPECT_EQ(*t.completion, T(8));
    EXPECT_EQ(timing::completion_time(t, o.delays), *t.completion);
}

TEST(Engine, HopelessOnArrivalIsNeverAssigned) {
    auto c = flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 0, 3, 1.0, 5.0)});
    c.topology.vehicles[0].rsu_distance = 100.0; // 5 units of transmission
    const auto report = run(c);
    const auto& t = task(report, 0);
    EXPECT_EQ(t.state, TaskState::Invalid);
    EXPECT_EQ(outcome(report, 0).reason, InvalidReason::ArrivalInfeasible);
    EXPECT_EQ(count_kind(report, EventKind::Assigned, 0), 0);
    EXPECT_EQ(count_kind(report, EventKind::MarkedInvalid, 0), 1);
}

TEST(Engine, TransmissionIncludesBothHops) {
    auto c = flat_config({test::make_server(0, {1.0}, 100.0, 100.0)}, {test::make_task(0, 0, 40, 5.0, 2.0)});
    c.topology.vehicles[0].rsu_distance = 50.0;
    const auto report = run(c);
    const auto& t = task(report, 0);
    const auto& o = outcome(report, 0);
    // 2/100*50 = 1 to the broker, 2/100*100 = 2 to the server.
    EXPECT_EQ(*t.broker_arrival, T(1));
    EXPECT_EQ(o.delays.transmission, T(3));
    EXPECT_EQ(o.start, T(3));
    EXPECT_EQ(*t.completion, T(8));
    EXPECT_EQ(timing::completion_time(t, o.delays), *t.completion);
}

TEST(Engine, NonPreemptiveFifoPerPu) {
    // Two tasks on a single PU: the second waits for the first.
    const auto report = run(flat_config({test::make_server(0, {1.0})},
                                        {test::make_task(0, 0, 40, 5.0), test::make_task(1, 0, 40, 3.0)}));
    const auto& a = outcome(report, 0);
    const auto& b = outcome(report, 1);
    EXPECT_EQ(a.start, T(0));
    EXPECT_EQ(a.finish, T(5));
    EXPECT_EQ(b.start, T(5));
    EXPECT_EQ(b.finish, T(8));
    EXPECT_EQ(b.delays.broker_queue, T(5));
    EXPECT_TRUE(report.violations.empty());
}

TEST(Engine, SnapshotBookkeeping) {
    PuSchedule s;
    const auto slot = s.commit(7, T(10), T(5));
    EXPECT_EQ(slot.start, T(10));
    EXPECT_EQ(s.busy_until(), T(15));
    EXPECT_EQ(s.committed_load(T(10)), T(5));
    EXPECT_EQ(s.committed_load(T(12)), T(3));
    EXPECT_TRUE(s.drain(T(14)).empty());
    EXPECT_EQ(s.drain(T(15)).size(), 1u);

    Engine engine(flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 10, 40, 5.0)}));
    while (engine.now() <= T(10)) engine.step();
    const auto view = engine.snapshot();
    EXPECT_EQ(view.now, T(11));
    EXPECT_EQ(view.servers[0].pus[0].busy_until, T(15));
    EXPECT_EQ(view.servers[0].pus[0].committed_load, T(4));
}

TEST(Engine, StandbyPuIsFlaggedInTheSnapshot) {
    auto c = flat_config({test::make_server(0, {1.0, 1.0, 1.0})}, {test::make_task(0, 0, 40, 1.0)});
    c.rsp.pora_enabled = true;
    c.pora.enabled = true;
    c.pora.k = 1;
    Engine engine(c);
    const auto view = engine.snapshot();
    EXPECT_TRUE(view.servers[0].pus[0].reserved);
    EXPECT_FALSE(view.servers[0].pus[1].reserved);
    EXPECT_TRUE(engine.reservation().is_reserved({0, 0}));
}

TEST(Engine, PoraLifecycle) {
    // PU 0.0 becomes the standby PU (equal rates, k = 1), PU 0.1 is the normal pool.
    auto c = flat_config({test::make_server(0, {1.0, 1.0})},
                         {test::make_task(0, 0, 20, 10.0), test::make_task(1, 0, 8, 5.0),
                          test::make_task(2, 0, 9, 5.0), test::make_task(3, 6, 9, 2.0)});
    c.tsp = tsp::TspKind::FCFS;
    c.rsp.pora_enabled = true;
    c.pora.enabled = true;
    c.pora.k = 1;
    const auto report = run(c);
    EXPECT_TRUE(report.violations.empty()) << report.violations.front();
    EXPECT_EQ(report.reserved, (std::vector<PuId>{{0, 0}}));

    EXPECT_EQ(*outcome(report, 0).pu, (PuId{0, 1}));
    EXPECT_FALSE(outcome(report, 0).via_pora);

    EXPECT_EQ(*outcome(report, 1).pu, (PuId{0, 0}));
    EXPECT_TRUE(outcome(report, 1).via_pora);
    EXPECT_EQ(count_kind(report, EventKind::PoraDispatched, 1), 1);
    EXPECT_EQ(count_kind(report, EventKind::PoraReleased, 1), 1);

    EXPECT_EQ(task(report, 2).state, TaskState::Invalid);
    EXPECT_EQ(outcome(report, 2).reason, InvalidReason::NoReservedPu);

    EXPECT_TRUE(outcome(report, 3).via_pora);
    EXPECT_EQ(*task(report, 3).completion, T(8));
    EXPECT_TRUE(task_is_processed(task(report, 3)));
}

TEST(Engine, WithoutEscalationTheNormalPoolDecides) {
    auto c = flat_config({test::make_server(0, {1.0, 1.0})},
                         {test::make_task(0, 0, 20, 10.0), test::make_task(1, 0, 8, 5.0)});
    c.tsp = tsp::TspKind::FCFS;
    c.pora.reserve_when_disabled = true;
    c.pora.k = 1;
    const auto report = run(c);
    EXPECT_EQ(*outcome(report, 0).pu, (PuId{0, 1}));
    EXPECT_EQ(outcome(report, 1).reason, InvalidReason::NoFeasiblePu);

    c.pora.reserve_when_disabled = false;
    const auto full = run(c);
    EXPECT_EQ(task(full, 1).state, TaskState::Completed);
    EXPECT_TRUE(full.reserved.empty());
}

TEST(Engine, ConfigValidation) {
    auto c = flat_config({test::make_server(0, {1.0, 1.0})}, {test::make_task(0, 0, 20, 1.0)});
    c.rsp.kind = rsp::RspKind::LatestFeasible;
    c.pora.enabled = true;
    EXPECT_THROW(c.validate(), ConfigError);

    c = flat_config({test::make_server(0, {1.0, 1.0})}, {test::make_task(0, 0, 20, 1.0)});
    c.pora.enabled = true;
    EXPECT_THROW(c.validate(), ConfigError);

    c = flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 5, 20, 1.0), test::make_task(1, 1, 20, 1.0)});
    EXPECT_THROW(c.validate(), ConfigError);

    c = flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 5, 5, 1.0)});
    EXPECT_THROW(c.validate(), ConfigError);

    c = flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 0, 5, 1.0, 1.0, 3)});
    EXPECT_THROW(c.validate(), ConfigError);

    c = flat_config({}, {});
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Engine, DefaultScenarioInvariants) {
    for (auto tsp : {tsp::TspKind::FCFS, tsp::TspKind::COVERT, tsp::TspKind::EFDF}) {
        for (auto rsp : {rsp::RspKind::ShortestExecution, rsp::RspKind::Random, rsp::RspKind::LatestFeasible,
                         rsp::RspKind::SARS}) {
            const auto report = run(default_config(3, tsp, rsp, false));
            EXPECT_TRUE(report.violations.empty()) << tsp::to_string(tsp) << "/" << rsp::to_string(rsp);
            EXPECT_EQ(report.tasks.size(), 800u);
            for (const auto& t : report.tasks) EXPECT_TRUE(t.terminal());
        }
    }
    const auto report = run(default_config(3, tsp::TspKind::COVERT, rsp::RspKind::SARS, true));
    EXPECT_TRUE(report.violations.empty());
    EXPECT_EQ(report.reserved.size(), 4u);
}

TEST(Engine, RunTwiceSameTrace) {
    const auto a = run(default_config(5, tsp::TspKind::EDF, rsp::RspKind::Random, false));
    const auto b = run(default_config(5, tsp::TspKind::EDF, rsp::RspKind::Random, false));
    std::ostringstream ta, tb;
    write_trace(ta, a);
    write_trace(tb, b);
    EXPECT_EQ(ta.str(), tb.str());
    EXPECT_FALSE(ta.str().empty());
}

TEST(Engine, CheckReportCatchesTampering) {
    auto report = run(default_config(2, tsp::TspKind::EDF, rsp::RspKind::SARS, false));
    ASSERT_TRUE(check_report(report).empty());
    for (std::size_t i = 0; i < report.tasks.size(); ++i) {
        if (report.tasks[i].state != TaskState::Completed) continue;
        report.outcomes[i].delays.broker_queue += T(1);
        break;
    }
    EXPECT_FALSE(check_report(report).empty());
}

TEST(Engine, TraceRecords) {
    auto c = flat_config({test::make_server(0, {1.0})}, {test::make_task(0, 0, 40, 5.0), test::make_task(1, 0, 2, 5.0)});
    const auto report = run(c);
    std::ostringstream out;
    write_trace(out, report);
    const auto s = out.str();
    EXPECT_NE(s.find(R"({"t":0.000,"kind":"TaskReleased","task":0})"), std::string::npos);
    EXPECT_NE(s.find(R"("kind":"Completed","task":0,"pu":"0.0","release":0.000,"td":0.000,"bq":0.000,"pro":5.000)"),
              std::string::npos);
    EXPECT_NE(s.find(R"("kind":"MarkedInvalid","task":1,"reason":"arrival-infeasible")"), std::string::npos);
}
