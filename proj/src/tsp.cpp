#include "sars/tsp.hpp"

#include "sars/errors.hpp"
#include "sars/timing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <tuple>

namespace sars::tsp {

namespace {

constexpr std::array<std::pair<TspKind, std::string_view>, 8> kNames{{
    {TspKind::FCFS, "fcfs"},
    {TspKind::EDF, "edf"},
    {TspKind::EDD, "edd"},
    {TspKind::EFDF, "efdf"},
    {TspKind::CR, "cr"},
    {TspKind::COVERT, "covert"},
    {TspKind::ERA, "era"},
    {TspKind::PQM, "pqm"},
}};

} // namespace

std::string_view to_string(TspKind kind) {
    for (const auto& [k, n] : kNames)
        if (k == kind) return n;
    return "?";
}

std::optional<TspKind> parse_tsp(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

void TspParams::validate() const {
    if (!(covert_k > 0.0)) throw ConfigError("tsp.covert_k", "must be > 0");
    if (!(era_high > 0.0) || !(era_medium >= era_high))
        throw ConfigError("tsp.era", "thresholds must satisfy 0 < high <= medium");
    if (!(pqm_critical >= 0.0)) throw ConfigError("tsp.pqm_critical", "must be >= 0");
}

double best_case_processing(const QueuedTask& t, double max_rate) {
    return timing::processing_delay(t.workload, max_rate);
}

double slack(const QueuedTask& t, SimTime now, double max_rate) {
    return (t.deadline - now).units() - best_case_processing(t, max_rate);
}

double critical_ratio(const QueuedTask& t, SimTime now, double max_rate) {
    return (t.deadline - now).units() / best_case_processing(t, max_rate);
}

double covert_index(const QueuedTask& t, SimTime now, double max_rate, double look_ahead) {
    const double p = best_case_processing(t, max_rate);
    const double s = std::max(0.0, slack(t, now, max_rate));
    const double cost = std::max(0.0, 1.0 - s / (look_ahead * p));
    return cost / p;
}

int era_bucket(const QueuedTask& t, SimTime now, double max_rate, const TspParams& params) {
    const double ratio = slack(t, now, max_rate) / best_case_processing(t, max_rate);
    if (ratio < params.era_high) return 0;
    if (ratio < params.era_medium) return 1;
    return 2;
}

bool pqm_is_critical(const QueuedTask& t, SimTime now, double max_rate, const TspParams& params) {
    return slack(t, now, max_rate) <= params.pqm_critical * best_case_processing(t, max_rate);
}

TspPolicy::TspPolicy(TspKind kind, TspParams params) : kind_(kind), params_(params) { params_.validate(); }

QueueOrder TspPolicy::order_queue(const QueueView& view) {
    struct Keyed {
        const QueuedTask* task;
        double primary;
        double secondary;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(view.tasks.size());

    const double rate = view.max_rate;
    for (const auto& t : view.tasks) {
        Keyed k{&t, 0.0, 0.0};
        switch (kind_) {
        case TspKind::FCFS:
            k.primary = t.broker_arrival.units();
            break;
        case TspKind::EDF:
            k.primary = t.deadline.units();
            break;
        case TspKind::EDD: {
            auto [it, inserted] = edd_frozen_.try_emplace(t.id, t.deadline);
            k.primary = it->second.units();
            break;
        }
        case TspKind::EFDF: {
            const bool feasible = view.now + SimTime::from_units(best_case_processing(t, rate)) <= t.deadline;
            k.primary = feasible ? 0.0 : 1.0;
            k.secondary = t.deadline.units();
            break;
        }
        case TspKind::CR:
            k.primary = critical_ratio(t, view.now, rate);
            break;
        case TspKind::COVERT:
            k.primary = -covert_index(t, view.now, rate, params_.covert_k);
            break;
        case TspKind::ERA:
            k.primary = era_bucket(t, view.now, rate, params_);
            break;
        case TspKind::PQM:
            k.primary = pqm_is_critical(t, view.now, rate, params_) ? 0.0 : 1.0;
            break;
        }
        keyed.push_back(k);
    }

    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return std::tie(a.primary, a.secondary, a.task->broker_arrival, a.task->id) <
               std::tie(b.primary, b.secondary, b.task->broker_arrival, b.task->id);
    });

    QueueOrder out;
    out.order.reserve(keyed.size());
    out.infeasible_from = keyed.size();
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        out.order.push_back(keyed[i].task->id);
        if (kind_ == TspKind::EFDF && keyed[i].primary > 0.0 && out.infeasible_from == keyed.size())
            out.infeasible_from = i;
    }
    return out;
}

} // namespace sars::tsp
