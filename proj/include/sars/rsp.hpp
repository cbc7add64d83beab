#pragma once

#include "sars/model.hpp"
#include "sars/rng.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sars::rsp {

enum class RspKind { ShortestExecution, Random, LatestFeasible, SARS };

std::string_view to_string(RspKind kind);
std::optional<RspKind> parse_rsp(std::string_view name);

struct RspPolicy {
    RspKind kind = RspKind::SARS;
    double alpha = 1.0;
    double beta = 0.5;
    // +1 scores the load factor exactly as in the suitability formula; -1
    // turns it into a penalty.
    int beta_sign = +1;
    bool pora_enabled = false;

    void validate() const;
};

// Immutable per-tick view of every server. Reserved PUs are present but
// flagged; no normal-pool policy ever considers them.
struct ResourceView {
    SimTime now;
    std::vector<EdgeServer> servers;
};

// Broker->server hop for this task, quantized.
SimTime server_link_delay(const Task& task, const EdgeServer& server);

struct SuitabilityRow {
    PuId pu;
    SimTime est_completion;
    double time_margin = 0.0;
    double load_factor = 0.0;
    double score = 0.0;
    bool feasible = false;
};

double time_margin(double deadline, double est_completion);
double time_margin(const Task& task, SimTime est_completion);

// load / max_load, or 0 when max_load is 0.
double load_factor(double load, double max_load);
// Against the largest committed load of the non-reserved pool.
double load_factor(const ProcessingUnit& pu, const ResourceView& view);

double suitability_score(double est_completion, double time_margin, double load_factor, double alpha, double beta,
                         int beta_sign = +1);

// One row per non-reserved PU, in (server, pu) order.
std::vector<SuitabilityRow> suitability_rows(const RspPolicy& policy, const Task& task, const ResourceView& view);

enum class Outcome { Assign, Escalate, Invalid };

struct Selection {
    Outcome outcome = Outcome::Invalid;
    PuId pu;
    SimTime est_completion;
};

// Random draws from `rng` only when the feasible set has more than one member.
Selection select_pu(const RspPolicy& policy, const Task& task, const ResourceView& view, Rng& rng);

} // namespace sars::rsp
