#pragma once

#include "sars/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sars::workload {

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Range&, const Range&) = default;
};

// One task group. The deadline of a task is release + workload + slack.
struct GroupSpec {
    int group = 1;
    Range release;
    Range slack;
    Range workload; // MI
    Range size;     // KB
    int count = 0;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct WorkloadPlan {
    std::vector<GroupSpec> groups;
    int vehicles = 4;

    // Four groups of 200: tight/loose release x tight/loose deadline.
    static WorkloadPlan defaults();

    void validate() const;
    int total() const;

    friend bool operator==(const WorkloadPlan&, const WorkloadPlan&) = default;
};

// Group g draws from its own sub-stream in the order release, workload,
// slack, size per task. Release, slack and size are quantized to the time
// resolution, workload to 0.1 MI. Tasks go round-robin over vehicles in
// generation order; ids follow generation order; output is sorted by
// (release, id).
std::vector<Task> generate(const WorkloadPlan& plan, std::uint64_t seed);

struct ReleaseEvent {
    SimTime time; // first tick boundary at or after the release
    TaskId task;
};

// Tasks must be sorted by release.
std::vector<ReleaseEvent> release_events(std::span<const Task> tasks, SimTime tick = SimTime::whole_units(1));

// id,vehicle,group,release,deadline,workload,size
void write_csv(std::ostream& out, std::span<const Task> tasks);
std::vector<Task> read_csv(std::istream& in);

} // namespace sars::workload
