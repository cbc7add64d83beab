#include "sars/pora.hpp"

#include "sars/errors.hpp"
#include "sars/timing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sars::pora {

bool ReservationState::is_reserved(PuId pu) const {
    auto it = reserved.find(pu.server);
    return it != reserved.end() && it->second == pu;
}

std::vector<PuId> ReservationState::reserved_pus() const {
    std::vector<PuId> out;
    for (const auto& [server, pu] : reserved) out.push_back(pu);
    return out;
}

double mean_rate(std::span<const ProcessingUnit> pus) {
    if (pus.empty()) throw DomainError("mean rate of an empty server");
    double sum = 0.0;
    for (const auto& pu : pus) sum += pu.rate;
    return sum / static_cast<double>(pus.size());
}

std::vector<double> rate_differences(std::span<const ProcessingUnit> pus) {
    const double mean = mean_rate(pus);
    std::vector<double> diffs;
    diffs.reserve(pus.size());
    for (const auto& pu : pus) diffs.push_back(std::abs(pu.rate - mean));
    return diffs;
}

std::vector<PuId> candidate_pool(const EdgeServer& server, int k) {
    const auto diffs = rate_differences(server.pus);
    std::vector<std::size_t> idx(server.pus.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (diffs[a] != diffs[b]) return diffs[a] < diffs[b];
        return server.pus[a].id < server.pus[b].id;
    });
    const auto take = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(k, 0)));
    std::vector<PuId> pool;
    for (std::size_t i = 0; i < take; ++i) pool.push_back(server.pus[idx[i]].id);
    return pool;
}

ReservationState reserve(std::span<const EdgeServer> servers, int k, Rng& rng) {
    if (k < 1) throw ConfigError("pora.k", "must be >= 1");
    ReservationState state;
    state.top_k = k;
    for (const auto& s : servers) {
        if (static_cast<int>(s.pus.size()) <= k)
            throw ConfigError("server " + std::to_string(s.id),
                              "needs more than k=" + std::to_string(k) + " PUs to reserve one");
        const auto pool = candidate_pool(s, k);
        state.reserved[s.id] = pool[rng.index(pool.size())];
    }
    return state;
}

std::optional<Dispatch> dispatch_urgent(ReservationState& state, const Task& task, const rsp::ResourceView& view) {
    std::optional<Dispatch> best;
    for (const auto& s : view.servers) {
        auto it = state.reserved.find(s.id);
        if (it == state.reserved.end() || state.in_use.count(it->second)) continue;
        const auto pu = std::find_if(s.pus.begin(), s.pus.end(),
                                     [&](const ProcessingUnit& p) { return p.id == it->second; });
        if (pu == s.pus.end()) continue;
        const SimTime est = view.now + rsp::server_link_delay(task, s) + timing::processing_time(task.workload, pu->rate);
        if (est > task.deadline) continue;
        if (!best || est < best->est_completion) best = Dispatch{pu->id, est};
    }
    if (best) state.in_use.insert(best->pu);
    return best;
}

void release_reserved(ReservationState& state, PuId pu) {
    if (state.in_use.erase(pu) == 0)
        throw std::logic_error("release_reserved: pu " + pu.str() + " is not in use");
}

} // namespace sars::pora
