#pragma once

#include "sars/model.hpp"
#include "sars/rng.hpp"
#include "sars/rsp.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace sars::pora {

// One standby PU per server, fixed for the whole run.
struct ReservationState {
    std::map<int, PuId> reserved; // server id -> standby PU
    std::set<PuId> in_use;        // standby PUs currently running an urgent task
    int top_k = 3;

    bool is_reserved(PuId pu) const;
    std::vector<PuId> reserved_pus() const;
};

// Mean processing rate over the server's PUs.
double mean_rate(std::span<const ProcessingUnit> pus);

// |rate - mean| per PU, in input order.
std::vector<double> rate_differences(std::span<const ProcessingUnit> pus);

// The k PUs closest to the mean rate, ties by lower id, in that order.
std::vector<PuId> candidate_pool(const EdgeServer& server, int k);

// Picks one standby PU per server uniformly from its candidate pool. Every
// server needs more than k PUs so the normal pool is never empty; otherwise
// throws ConfigError.
ReservationState reserve(std::span<const EdgeServer> servers, int k, Rng& rng);

struct Dispatch {
    PuId pu;
    SimTime est_completion;
};

// Free standby PU that finishes the task earliest within its deadline (ties by
// lower server id). Marks it in use. nullopt means the task is invalid.
std::optional<Dispatch> dispatch_urgent(ReservationState& state, const Task& task, const rsp::ResourceView& view);

// Returns a standby PU after its urgent task finished. Throws
// std::logic_error if the PU was not in use.
void release_reserved(ReservationState& state, PuId pu);

} // namespace sars::pora
