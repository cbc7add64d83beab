#pragma once

#include "sars/model.hpp"
#include "sars/pora.hpp"
#include "sars/rng.hpp"
#include "sars/rsp.hpp"
#include "sars/timing.hpp"
#include "sars/tsp.hpp"
#include "sars/workload.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sars::engine {

enum class EventKind { TaskReleased, BrokerArrival, Assigned, Started, Completed, MarkedInvalid, PoraDispatched, PoraReleased };

std::string_view to_string(EventKind kind);

struct Event {
    SimTime time;
    EventKind kind = EventKind::TaskReleased;
    TaskId task = 0;
    std::optional<PuId> pu;
};

enum class InvalidReason { None, NoFeasiblePu, NoReservedPu, ArrivalInfeasible };

std::string_view to_string(InvalidReason reason);

struct PoraSettings {
    bool enabled = false;
    int k = 3;
    // Keep the standby PUs out of the normal pool even when escalation is
    // off. By default a run without escalation uses every PU.
    bool reserve_when_disabled = false;

    bool reserves() const { return enabled || reserve_when_disabled; }
};

struct EngineConfig {
    Topology topology;
    std::vector<Task> tasks; // sorted by (release, id)
    tsp::TspKind tsp = tsp::TspKind::EDF;
    tsp::TspParams tsp_params;
    rsp::RspPolicy rsp;
    PoraSettings pora;
    std::uint64_t seed = 1;
    SimTime tick = SimTime::whole_units(1);
    // Invalidate queued tasks that even the fastest PU cannot finish in time.
    bool screen_infeasible = true;
    // Per-tick schedule checks; findings land in SimulationReport::violations.
    bool debug = false;

    void validate() const;
};

struct TaskOutcome {
    TaskId id = 0;
    std::optional<PuId> pu;
    bool via_pora = false;
    SimTime assignment;
    SimTime start;
    SimTime finish;
    timing::DelayBreakdown delays;
    InvalidReason reason = InvalidReason::None;
};

struct SimulationReport {
    Topology topology;
    std::vector<Task> tasks;           // terminal states, same order as the config
    std::vector<TaskOutcome> outcomes; // aligned with tasks
    std::vector<Event> trace;          // ordered by time, then emission
    std::vector<PuId> reserved;
    std::vector<std::string> violations;
};

// Non-preemptive FIFO schedule of one PU.
class PuSchedule {
public:
    struct Slot {
        TaskId task;
        SimTime start;
        SimTime finish;
    };

    SimTime busy_until() const { return busy_until_; }
    // Remaining processing of every slot not yet finished at `now`.
    SimTime committed_load(SimTime now) const;
    const std::deque<Slot>& slots() const { return slots_; }

    Slot commit(TaskId task, SimTime earliest_start, SimTime processing);
    // Removes and returns slots finished by `now`.
    std::vector<Slot> drain(SimTime now);

private:
    std::deque<Slot> slots_;
    SimTime busy_until_;
};

class Engine {
public:
    explicit Engine(EngineConfig config);

    bool done() const { return remaining_ == 0; }
    SimTime now() const { return now_; }

    // Runs one broker tick and advances the clock.
    void step();

    rsp::ResourceView snapshot() const;
    const pora::ReservationState& reservation() const { return reservation_; }
    const std::vector<Task>& tasks() const { return tasks_; }

    // Steps until every task is terminal and assembles the report.
    SimulationReport finish();

private:
    struct PuSlot {
        PuId id;
        double rate;
        bool reserved;
        PuSchedule schedule;
    };

    std::size_t index_of(TaskId id) const;
    PuSlot& pu_slot(PuId id);
    void emit(SimTime t, EventKind kind, TaskId task, std::optional<PuId> pu = std::nullopt);
    void advance_executions();
    void release_and_transmit();
    void screen_queue();
    void assign_queue();
    void commit(Task& task, PuId pu, bool via_pora, rsp::ResourceView& view);
    void mark_invalid(Task& task, InvalidReason reason);
    void check_tick();

    EngineConfig config_;
    std::vector<Task> tasks_;
    std::vector<TaskOutcome> outcomes_;
    std::unordered_map<TaskId, std::size_t> id_index_;
    std::unordered_map<int, Vehicle> vehicles_;
    std::vector<std::vector<PuSlot>> pus_; // [server position][pu position]
    std::vector<std::size_t> server_pos_;
    std::vector<workload::ReleaseEvent> releases_;
    std::size_t next_release_ = 0;
    std::vector<std::size_t> in_transit_;
    std::vector<std::size_t> queue_;
    std::vector<Event> trace_;
    std::vector<std::string> violations_;
    tsp::TspPolicy tsp_;
    pora::ReservationState reservation_;
    Rng random_rsp_;
    double max_rate_ = 1.0;
    SimTime now_;
    std::size_t remaining_ = 0;
};

SimulationReport run(EngineConfig config);

// Post-run invariants: conservation, one terminal event per task, time-ordered
// trace, completion bookkeeping, deadline safety, disjoint PU intervals and
// standby-PU exclusivity. Empty when everything holds.
std::vector<std::string> check_report(const SimulationReport& report);

// One JSON object per line: {"t":..,"kind":..,"task":..[,"pu":"k.j"]}.
// Completed records also carry release, td, bq and pro.
void write_trace(std::ostream& out, const SimulationReport& report);

} // namespace sars::engine
