#pragma once

#include "sars/time.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sars {

using TaskId = std::int64_t;

// (server index k, pu index j). Ordered lexicographically; that order is the
// "lower PU id" used by every tie-break.
struct PuId {
    int server = 0;
    int index = 0;

    friend constexpr auto operator<=>(const PuId&, const PuId&) = default;
    std::string str() const;
};

enum class TaskState { Generated, InTransit, Queued, Assigned, Running, Completed, Invalid };

std::string_view to_string(TaskState s);

// Forward-only lifecycle; Invalid is reachable only from Queued or Assigned.
bool can_transition(TaskState from, TaskState to);

struct Task {
    TaskId id = 0;
    int vehicle_id = 0;
    int group = 1;
    SimTime release;
    SimTime deadline;
    double workload = 0.0;  // MI
    double file_size = 0.0; // KB
    SimTime slack;          // drawn deadline slack, kept for trace verification

    TaskState state = TaskState::Generated;
    std::optional<SimTime> broker_arrival;
    std::optional<SimTime> assignment_time;
    std::optional<SimTime> completion;

    bool terminal() const { return state == TaskState::Completed || state == TaskState::Invalid; }
};

// Throws std::logic_error on an illegal lifecycle step.
void advance_state(Task& task, TaskState to);

// Completed and finished no later than the deadline.
bool task_is_processed(const Task& task);

struct ProcessingUnit {
    PuId id;
    double rate = 1.0; // MI per time unit
    SimTime busy_until;
    SimTime committed_load;
    bool reserved = false;
};

struct EdgeServer {
    int id = 0;
    std::vector<ProcessingUnit> pus;
    double broker_distance = 0.0;  // m
    double broker_bandwidth = 1.0; // KB per time unit
};

struct Rsu {
    int id = 0;
};

struct Vehicle {
    int id = 0;
    int rsu_id = 0;
    double rsu_distance = 0.0;
    double rsu_bandwidth = 1.0;
};

struct Topology {
    std::vector<Vehicle> vehicles;
    std::vector<Rsu> rsus;
    std::vector<EdgeServer> servers;
    double min_distance = 50.0;
    double max_distance = 250.0;

    double max_rate() const;
    std::size_t pu_count() const;
};

// Throws ConfigError naming the first violated rule.
void validate_topology(const Topology& topology);

// Parameters for sampling a static topology.
struct TopologySpec {
    int vehicles = 4;
    int rsus = 2;
    int servers = 4;
    int min_pus = 8;
    int max_pus = 12;
    double min_rate = 0.5;
    double max_rate = 1.2;
    double min_distance = 50.0;
    double max_distance = 250.0;
    double vehicle_bandwidth = 100.0;
    double broker_bandwidth = 100.0;

    void validate() const;

    friend bool operator==(const TopologySpec&, const TopologySpec&) = default;
};

// Vehicle v attaches to RSU v mod rsus. Draw order: vehicle distances, then
// per server its broker distance, PU count, and PU rates.
Topology generate_topology(const TopologySpec& spec, std::uint64_t seed);

} // namespace sars
