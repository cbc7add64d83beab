#include "sars/rsp.hpp"

#include "sars/errors.hpp"
#include "sars/timing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sars::rsp {

namespace {

constexpr std::array<std::pair<RspKind, std::string_view>, 4> kNames{{
    {RspKind::ShortestExecution, "shortest"},
    {RspKind::Random, "random"},
    {RspKind::LatestFeasible, "latest"},
    {RspKind::SARS, "sars"},
}};

} // namespace

std::string_view to_string(RspKind kind) {
    for (const auto& [k, n] : kNames)
        if (k == kind) return n;
    return "?";
}

std::optional<RspKind> parse_rsp(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

void RspPolicy::validate() const {
    if (!std::isfinite(alpha)) throw ConfigError("rsp.alpha", "must be finite");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("rsp.beta", "must be >= 0");
    if (beta_sign != 1 && beta_sign != -1) throw ConfigError("rsp.beta_sign", "must be +1 or -1");
    if (pora_enabled && kind != RspKind::SARS)
        throw ConfigError("rsp.pora", "reserved-PU escalation is only available with sars");
}

SimTime server_link_delay(const Task& task, const EdgeServer& server) {
    return SimTime::from_units(
        timing::link_delay(task.file_size, {server.broker_distance, server.broker_bandwidth}));
}

double time_margin(double deadline, double est_completion) { return deadline - est_completion; }

double time_margin(const Task& task, SimTime est_completion) { return (task.deadline - est_completion).units(); }

double load_factor(double load, double max_load) { return max_load > 0.0 ? load / max_load : 0.0; }

double load_factor(const ProcessingUnit& pu, const ResourceView& view) {
    SimTime max_load;
    for (const auto& s : view.servers)
        for (const auto& p : s.pus)
            if (!p.reserved) max_load = max(max_load, p.committed_load);
    return load_factor(pu.committed_load.units(), max_load.units());
}

double suitability_score(double est_completion, double time_margin, double load_factor, double alpha, double beta,
                         int beta_sign) {
    return est_completion + alpha * time_margin + beta_sign * beta * load_factor;
}

std::vector<SuitabilityRow> suitability_rows(const RspPolicy& policy, const Task& task, const ResourceView& view) {
    SimTime max_load;
    for (const auto& s : view.servers)
        for (const auto& p : s.pus)
            if (!p.reserved) max_load = max(max_load, p.committed_load);

    std::vector<SuitabilityRow> rows;
    for (const auto& s : view.servers) {
        const SimTime link = server_link_delay(task, s);
        for (const auto& pu : s.pus) {
            if (pu.reserved) continue;
            SuitabilityRow row;
            row.pu = pu.id;
            row.est_completion = timing::estimate_completion_on(task, pu, view.now, link);
            row.time_margin = time_margin(task, row.est_completion);
            row.load_factor = load_factor(pu.committed_load.units(), max_load.units());
            row.score = suitability_score(row.est_completion.units(), row.time_margin, row.load_factor, policy.alpha,
                                          policy.beta, policy.beta_sign);
            row.feasible = row.est_completion <= task.deadline;
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

Selection assign(const SuitabilityRow& row) { return {Outcome::Assign, row.pu, row.est_completion}; }

// Scores that agree to within rounding noise are ties. Without this, equal
// scores computed along different rounding paths (alpha = 1 makes every score
// the deadline) would bypass the tie-break.
constexpr double kScoreTie = 1e-9;

Selection select_sars(const RspPolicy& policy, const std::vector<SuitabilityRow>& rows) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows)
        if (row.feasible) top = std::max(top, row.score);

    const SuitabilityRow* best = nullptr;
    for (const auto& row : rows) {
        if (!row.feasible || row.score < top - kScoreTie * std::max(1.0, std::abs(top))) continue;
        if (!best || row.est_completion < best->est_completion ||
            (row.est_completion == best->est_completion && row.pu < best->pu))
            best = &row;
    }
    if (best) return assign(*best);
    return {policy.pora_enabled ? Outcome::Escalate : Outcome::Invalid, {}, {}};
}

} // namespace

Selection select_pu(const RspPolicy& policy, const Task& task, const ResourceView& view, Rng& rng) {
    const auto rows = suitability_rows(policy, task, view);
    switch (policy.kind) {
    case RspKind::SARS:
        return select_sars(policy, rows);
    case RspKind::ShortestExecution: {
        const SuitabilityRow* best = nullptr;
        for (const auto& row : rows)
            if (!best || row.est_completion < best->est_completion) best = &row;
        if (best && best->feasible) return assign(*best);
        return {};
    }
    case RspKind::LatestFeasible: {
        const SuitabilityRow* best = nullptr;
        for (const auto& row : rows)
            if (row.feasible && (!best || row.est_completion > best->est_completion)) best = &row;
        if (best) return assign(*best);
        return {};
    }
    case RspKind::Random: {
        std::vector<const SuitabilityRow*> feasible;
        for (const auto& row : rows)
            if (row.feasible) feasible.push_back(&row);
        if (feasible.empty()) return {};
        if (feasible.size() == 1) return assign(*feasible.front());
        return assign(*feasible[rng.index(feasible.size())]);
    }
    }
    return {};
}

} // namespace sars::rsp
