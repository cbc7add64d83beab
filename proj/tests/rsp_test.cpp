#include "sars/errors.hpp"
#include "sars/rsp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace sars;
using namespace sars::rsp;
using sars::test::T;

namespace {

// Two servers at zero distance; loads set per PU.
ResourceView view_with(SimTime now, const std::vector<std::vector<std::pair<double, double>>>& servers) {
    ResourceView v;
    v.now = now;
    for (std::size_t k = 0; k < servers.size(); ++k) {
        std::vector<double> rates;
        for (auto [rate, load] : servers[k]) rates.push_back(rate);
        auto s = test::make_server(static_cast<int>(k), rates);
        for (std::size_t j = 0; j < servers[k].size(); ++j) {
            s.pus[j].committed_load = T(servers[k][j].second);
            s.pus[j].busy_until = now + s.pus[j].committed_load;
        }
        v.servers.push_back(s);
    }
    return v;
}

RspPolicy policy(RspKind kind, double alpha = 1.0, int sign = +1, bool pora = false) {
    RspPolicy p;
    p.kind = kind;
    p.alpha = alpha;
    p.beta_sign = sign;
    p.pora_enabled = pora;
    return p;
}

} // namespace

TEST(Rsp, Names) {
    for (auto k : {RspKind::ShortestExecution, RspKind::Random, RspKind::LatestFeasible, RspKind::SARS})
        EXPECT_EQ(parse_rsp(to_string(k)), k);
    EXPECT_FALSE(parse_rsp("fastest"));
}

TEST(TimeMargin, Examples) {
    EXPECT_DOUBLE_EQ(time_margin(100.0, 80.0), 20.0);
    EXPECT_DOUBLE_EQ(time_margin(10.0, 10.0), 0.0);
    EXPECT_DOUBLE_EQ(time_margin(10.0, 12.0), -2.0);
    const auto t = test::make_task(1, 0, 10, 1);
    EXPECT_DOUBLE_EQ(time_margin(t, T(12)), -2.0);
}

TEST(LoadFactor, Examples) {
    EXPECT_DOUBLE_EQ(load_factor(5.0, 10.0), 0.5);
    EXPECT_DOUBLE_EQ(load_factor(0.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(load_factor(10.0, 10.0), 1.0);
}

TEST(LoadFactor, NormalizedOverTheNormalPool) {
    auto v = view_with(T(0), {{{1.0, 5.0}, {1.0, 10.0}, {1.0, 40.0}}});
    v.servers[0].pus[2].reserved = true;
    EXPECT_DOUBLE_EQ(load_factor(v.servers[0].pus[0], v), 0.5);
    EXPECT_DOUBLE_EQ(load_factor(v.servers[0].pus[1], v), 1.0);
}

TEST(SuitabilityScore, Examples) {
    EXPECT_DOUBLE_EQ(suitability_score(80.0, 20.0, 0.5, 1.0, 0.5), 100.25);
    EXPECT_DOUBLE_EQ(suitability_score(80.0, 20.0, 0.5, 0.0, 0.0), 80.0);
    EXPECT_DOUBLE_EQ(suitability_score(80.0, 20.0, 0.5, 1.0, 0.5, -1), 99.75);
}

TEST(SuitabilityRows, OneRowPerNormalPu) {
    auto v = view_with(T(10), {{{1.0, 0.0}, {0.5, 4.0}}, {{1.0, 8.0}}});
    v.servers[1].pus[0].reserved = true;
    const auto task = test::make_task(1, 0, 30, 5.0);
    const auto rows = suitability_rows(policy(RspKind::SARS), task, v);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].pu, (PuId{0, 0}));
    EXPECT_EQ(rows[0].est_completion, T(15));
    EXPECT_DOUBLE_EQ(rows[0].time_margin, 15.0);
    EXPECT_DOUBLE_EQ(rows[0].load_factor, 0.0);
    EXPECT_EQ(rows[1].est_completion, T(24));
    EXPECT_DOUBLE_EQ(rows[1].load_factor, 1.0);
    for (const auto& r : rows) {
        EXPECT_DOUBLE_EQ(r.time_margin, (task.deadline - r.est_completion).units());
        EXPECT_EQ(r.feasible, r.time_margin >= 0.0);
    }
}

TEST(SelectPu, SarsPicksTheHigherScore) {
    // PU 0.0 finishes at 20 (lf 1): 20 + 0.5*20 + 0.5 = 30.5.
    // PU 0.1 finishes at 15 (lf 0): 15 + 0.5*25 = 27.5.
    auto v = view_with(T(10), {{{1.0, 5.0}, {1.0, 0.0}}});
    const auto task = test::make_task(1, 0, 40, 5.0);
    Rng rng(1);
    const auto sel = select_pu(policy(RspKind::SARS, 0.5), task, v, rng);
    ASSERT_EQ(sel.outcome, Outcome::Assign);
    EXPECT_EQ(sel.pu, (PuId{0, 0}));
    EXPECT_EQ(sel.est_completion, T(20));
}

TEST(SelectPu, SarsTieBreaksOnEstimateThenId) {
    // alpha 1, beta 0: every feasible PU scores the deadline.
    auto v = view_with(T(0), {{{1.0, 3.0}, {1.0, 0.0}}, {{1.0, 0.0}}});
    auto p = policy(RspKind::SARS);
    p.beta = 0.0;
    const auto task = test::make_task(1, 0, 40, 5.0);
    Rng rng(1);
    const auto sel = select_pu(p, task, v, rng);
    EXPECT_EQ(sel.pu, (PuId{0, 1}));
}

TEST(SelectPu, SarsEscalatesOrInvalidates) {
    auto v = view_with(T(10), {{{1.0, 10.0}}});
    const auto task = test::make_task(1, 0, 12, 5.0);
    Rng rng(1);
    EXPECT_EQ(select_pu(policy(RspKind::SARS, 1.0, +1, true), task, v, rng).outcome, Outcome::Escalate);
    EXPECT_EQ(select_pu(policy(RspKind::SARS), task, v, rng).outcome, Outcome::Invalid);
}

TEST(SelectPu, ShortestExecution) {
    auto v = view_with(T(0), {{{0.5, 0.0}, {1.0, 2.0}}, {{1.2, 6.0}}});
    const auto task = test::make_task(1, 0, 40, 6.0);
    Rng rng(1);
    const auto sel = select_pu(policy(RspKind::ShortestExecution), task, v, rng);
    // 12, 8, 11
    EXPECT_EQ(sel.pu, (PuId{0, 1}));
    const auto tight = test::make_task(2, 0, 7.9, 6.0);
    EXPECT_EQ(select_pu(policy(RspKind::ShortestExecution), tight, v, rng).outcome, Outcome::Invalid);
}

TEST(SelectPu, LatestFeasible) {
    auto v = view_with(T(0), {{{0.5, 0.0}, {1.0, 2.0}}, {{1.2, 6.0}}});
    const auto task = test::make_task(1, 0, 11.5, 6.0);
    Rng rng(1);
    const auto sel = select_pu(policy(RspKind::LatestFeasible), task, v, rng);
    EXPECT_EQ(sel.pu, (PuId{1, 0}));
    EXPECT_EQ(sel.est_completion, T(11));
    const auto none = test::make_task(2, 0, 7.0, 6.0);
    EXPECT_EQ(select_pu(policy(RspKind::LatestFeasible), none, v, rng).outcome, Outcome::Invalid);
}

TEST(SelectPu, RandomDrawsFromTheFeasibleSet) {
    auto v = view_with(T(0), {{{0.5, 0.0}, {1.0, 2.0}}, {{1.2, 6.0}, {1.0, 30.0}}});
    const auto task = test::make_task(1, 0, 11.5, 6.0);
    Rng rng(42);
    std::set<PuId> seen;
    for (int i = 0; i < 200; ++i) {
        const auto sel = select_pu(policy(RspKind::Random), task, v, rng);
        ASSERT_EQ(sel.outcome, Outcome::Assign);
        EXPECT_LE(sel.est_completion, task.deadline);
        seen.insert(sel.pu);
    }
    EXPECT_EQ(seen, (std::set<PuId>{{0, 1}, {1, 0}}));
}

TEST(SelectPu, ReservedPusAreNeverChosen) {
    auto v = view_with(T(0), {{{1.2, 0.0}, {0.5, 0.0}}});
    v.servers[0].pus[0].reserved = true;
    const auto task = test::make_task(1, 0, 100, 6.0);
    Rng rng(1);
    for (auto k : {RspKind::ShortestExecution, RspKind::Random, RspKind::LatestFeasible, RspKind::SARS})
        EXPECT_EQ(select_pu(policy(k), task, v, rng).pu, (PuId{0, 1}));
}

TEST(SelectPu, LinkDelayCountsTowardsTheEstimate) {
    ResourceView v;
    v.now = T(0);
    v.servers.push_back(test::make_server(0, {1.0}, 200.0, 100.0));
    const auto task = test::make_task(1, 0, 100, 5.0, 2.0);
    EXPECT_EQ(server_link_delay(task, v.servers[0]), T(4));
    const auto rows = suitability_rows(policy(RspKind::SARS), task, v);
    EXPECT_EQ(rows[0].est_completion, T(9));
}

TEST(RspPolicy, Validation) {
    auto p = policy(RspKind::LatestFeasible, 1.0, +1, true);
    EXPECT_THROW(p.validate(), ConfigError);
    p = policy(RspKind::SARS);
    p.beta = -0.1;
    EXPECT_THROW(p.validate(), ConfigError);
    p = policy(RspKind::SARS);
    p.beta_sign = 0;
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_NO_THROW(policy(RspKind::SARS, 0.9, -1, true).validate());
}
