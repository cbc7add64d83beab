#include "sars/model.hpp"

#include "sars/errors.hpp"
#include "sars/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace sars {

std::string SimTime::str() const {
    const std::int64_t whole = q_ / kQuantaPerUnit;
    std::int64_t frac = q_ % kQuantaPerUnit;
    char buf[48];
    if (q_ < 0) {
        std::snprintf(buf, sizeof buf, "-%lld.%03lld", static_cast<long long>(-whole),
                      static_cast<long long>(-frac));
    } else {
        std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(whole),
                      static_cast<long long>(frac));
    }
    return buf;
}

std::string PuId::str() const { return std::to_string(server) + "." + std::to_string(index); }

std::string_view to_string(TaskState s) {
    switch (s) {
    case TaskState::Generated: return "Generated";
    case TaskState::InTransit: return "InTransit";
    case TaskState::Queued: return "Queued";
    case TaskState::Assigned: return "Assigned";
    case TaskState::Running: return "Running";
    case TaskState::Completed: return "Completed";
    case TaskState::Invalid: return "Invalid";
    }
    return "?";
}

bool can_transition(TaskState from, TaskState to) {
    if (to == TaskState::Invalid) return from == TaskState::Queued || from == TaskState::Assigned;
    if (from == TaskState::Completed || from == TaskState::Invalid) return false;
    return static_cast<int>(to) == static_cast<int>(from) + 1;
}

void advance_state(Task& task, TaskState to) {
    if (!can_transition(task.state, to)) {
        throw std::logic_error("task " + std::to_string(task.id) + ": illegal transition " +
                               std::string(to_string(task.state)) + " -> " + std::string(to_string(to)));
    }
    task.state = to;
}

bool task_is_processed(const Task& task) {
    return task.state == TaskState::Completed && task.completion && *task.completion <= task.deadline;
}

double Topology::max_rate() const {
    double best = 0.0;
    for (const auto& s : servers)
        for (const auto& pu : s.pus) best = std::max(best, pu.rate);
    return best;
}

std::size_t Topology::pu_count() const {
    std::size_t n = 0;
    for (const auto& s : servers) n += s.pus.size();
    return n;
}

namespace {

void check_distance(const Topology& t, double d, const std::string& entity) {
    if (!std::isfinite(d) || d < t.min_distance || d > t.max_distance) {
        throw ConfigError(entity, "distance " + std::to_string(d) + " outside [" +
                                      std::to_string(t.min_distance) + ", " +
                                      std::to_string(t.max_distance) + "]");
    }
}

void check_bandwidth(double bw, const std::string& entity) {
    if (!(bw > 0.0) || !std::isfinite(bw)) throw ConfigError(entity, "bandwidth must be > 0");
}

} // namespace

void validate_topology(const Topology& t) {
    if (!(t.min_distance >= 0.0) || t.min_distance > t.max_distance)
        throw ConfigError("topology", "distance range must satisfy 0 <= lo <= hi");
    if (t.rsus.empty()) throw ConfigError("topology", "no RSUs");
    if (t.vehicles.empty()) throw ConfigError("topology", "no vehicles");
    if (t.servers.empty()) throw ConfigError("topology", "no edge servers");

    std::set<int> rsu_ids;
    for (const auto& r : t.rsus) {
        if (!rsu_ids.insert(r.id).second) throw ConfigError("rsu " + std::to_string(r.id), "duplicate id");
    }
    std::set<int> vehicle_ids;
    for (const auto& v : t.vehicles) {
        const std::string name = "vehicle " + std::to_string(v.id);
        if (!vehicle_ids.insert(v.id).second) throw ConfigError(name, "duplicate id");
        if (!rsu_ids.count(v.rsu_id)) throw ConfigError(name, "not linked to an existing RSU");
        check_distance(t, v.rsu_distance, name);
        check_bandwidth(v.rsu_bandwidth, name);
    }
    std::set<int> server_ids;
    for (const auto& s : t.servers) {
        const std::string name = "server " + std::to_string(s.id);
        if (!server_ids.insert(s.id).second) throw ConfigError(name, "duplicate id");
        if (s.pus.empty()) throw ConfigError(name, "has no processing units");
        check_distance(t, s.broker_distance, name);
        check_bandwidth(s.broker_bandwidth, name);
        std::set<int> pu_ids;
        for (const auto& pu : s.pus) {
            const std::string pname = "pu " + pu.id.str();
            if (pu.id.server != s.id) throw ConfigError(pname, "id does not carry server index " + std::to_string(s.id));
            if (!pu_ids.insert(pu.id.index).second) throw ConfigError(pname, "duplicate id");
            if (!(pu.rate > 0.0) || !std::isfinite(pu.rate)) throw ConfigError(pname, "rate must be > 0");
        }
    }
}

void TopologySpec::validate() const {
    if (vehicles <= 0) throw ConfigError("topology.vehicles", "must be > 0");
    if (rsus <= 0) throw ConfigError("topology.rsus", "must be > 0");
    if (servers <= 0) throw ConfigError("topology.servers", "must be > 0");
    if (min_pus <= 0 || min_pus > max_pus) throw ConfigError("topology.pus", "range must satisfy 0 < lo <= hi");
    if (!(min_rate > 0.0) || min_rate > max_rate) throw ConfigError("topology.pu_rate", "range must satisfy 0 < lo <= hi");
    if (!(min_distance >= 0.0) || min_distance > max_distance)
        throw ConfigError("topology.distance", "range must satisfy 0 <= lo <= hi");
    if (!(vehicle_bandwidth > 0.0)) throw ConfigError("topology.vehicle_bandwidth", "must be > 0");
    if (!(broker_bandwidth > 0.0)) throw ConfigError("topology.broker_bandwidth", "must be > 0");
}

Topology generate_topology(const TopologySpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed, Stream::Topology);
    Topology t;
    t.min_distance = spec.min_distance;
    t.max_distance = spec.max_distance;
    for (int r = 0; r < spec.rsus; ++r) t.rsus.push_back(Rsu{r});
    for (int v = 0; v < spec.vehicles; ++v) {
        t.vehicles.push_back(Vehicle{v, v % spec.rsus, rng.uniform(spec.min_distance, spec.max_distance),
                                     spec.vehicle_bandwidth});
    }
    for (int k = 0; k < spec.servers; ++k) {
        EdgeServer s;
        s.id = k;
        s.broker_distance = rng.uniform(spec.min_distance, spec.max_distance);
        s.broker_bandwidth = spec.broker_bandwidth;
        const auto count = static_cast<int>(rng.integer(spec.min_pus, spec.max_pus));
        for (int j = 0; j < count; ++j) {
            ProcessingUnit pu;
            pu.id = PuId{k, j};
            pu.rate = rng.uniform(spec.min_rate, spec.max_rate);
            s.pus.push_back(pu);
        }
        t.servers.push_back(std::move(s));
    }
    return t;
}

} // namespace sars
