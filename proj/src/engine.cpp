#include "sars/engine.hpp"

#include "sars/errors.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace sars::engine {

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::TaskReleased: return "TaskReleased";
    case EventKind::BrokerArrival: return "BrokerArrival";
    case EventKind::Assigned: return "Assigned";
    case EventKind::Started: return "Started";
    case EventKind::Completed: return "Completed";
    case EventKind::MarkedInvalid: return "MarkedInvalid";
    case EventKind::PoraDispatched: return "PoraDispatched";
    case EventKind::PoraReleased: return "PoraReleased";
    }
    return "?";
}

std::string_view to_string(InvalidReason reason) {
    switch (reason) {
    case InvalidReason::None: return "none";
    case InvalidReason::NoFeasiblePu: return "no-feasible-pu";
    case InvalidReason::NoReservedPu: return "no-reserved-pu";
    case InvalidReason::ArrivalInfeasible: return "arrival-infeasible";
    }
    return "?";
}

void EngineConfig::validate() const {
    validate_topology(topology);
    tsp_params.validate();
    rsp.validate();
    if (tick <= SimTime{}) throw ConfigError("engine.tick", "must be > 0");
    if (pora.enabled && rsp.kind != rsp::RspKind::SARS)
        throw ConfigError("pora", "escalation requires the sars resource policy");
    if (pora.enabled != rsp.pora_enabled) throw ConfigError("pora", "engine and policy disagree on escalation");
    std::set<int> vehicles;
    for (const auto& v : topology.vehicles) vehicles.insert(v.id);
    std::set<TaskId> ids;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        const std::string name = "task " + std::to_string(t.id);
        if (!ids.insert(t.id).second) throw ConfigError(name, "duplicate id");
        if (t.release < SimTime{}) throw ConfigError(name, "release must be >= 0");
        if (!(t.deadline > t.release)) throw ConfigError(name, "deadline must exceed release");
        if (!(t.workload > 0.0) || !(t.file_size > 0.0)) throw ConfigError(name, "workload and size must be > 0");
        if (!vehicles.count(t.vehicle_id)) throw ConfigError(name, "unknown vehicle");
        if (i > 0 && t.release < tasks[i - 1].release) throw ConfigError(name, "tasks must be sorted by release");
    }
}

SimTime PuSchedule::committed_load(SimTime now) const {
    SimTime load;
    for (const auto& s : slots_) {
        if (s.finish <= now) continue;
        load += s.finish - max(s.start, now);
    }
    return load;
}

PuSchedule::Slot PuSchedule::commit(TaskId task, SimTime earliest_start, SimTime processing) {
    const SimTime start = max(earliest_start, busy_until_);
    Slot slot{task, start, start + processing};
    slots_.push_back(slot);
    busy_until_ = slot.finish;
    return slot;
}

std::vector<PuSchedule::Slot> PuSchedule::drain(SimTime now) {
    std::vector<Slot> done;
    while (!slots_.empty() && slots_.front().finish <= now) {
        done.push_back(slots_.front());
        slots_.pop_front();
    }
    return done;
}

Engine::Engine(EngineConfig config)
    : config_((config.validate(), std::move(config))),
      tsp_(config_.tsp, config_.tsp_params),
      random_rsp_(config_.seed, Stream::RandomRsp) {
    tasks_ = config_.tasks;
    outcomes_.resize(tasks_.size());
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        auto& t = tasks_[i];
        t.state = TaskState::Generated;
        t.broker_arrival.reset();
        t.assignment_time.reset();
        t.completion.reset();
        outcomes_[i].id = t.id;
        id_index_[t.id] = i;
    }
    for (const auto& v : config_.topology.vehicles) vehicles_[v.id] = v;

    if (config_.pora.reserves()) {
        Rng rng(config_.seed, Stream::Reservation);
        reservation_ = pora::reserve(config_.topology.servers, config_.pora.k, rng);
    }
    for (const auto& s : config_.topology.servers) {
        std::vector<PuSlot> slots;
        for (const auto& pu : s.pus) slots.push_back(PuSlot{pu.id, pu.rate, reservation_.is_reserved(pu.id), {}});
        pus_.push_back(std::move(slots));
    }
    max_rate_ = config_.topology.max_rate();
    releases_ = workload::release_events(tasks_, config_.tick);
    remaining_ = tasks_.size();
}

std::size_t Engine::index_of(TaskId id) const { return id_index_.at(id); }

Engine::PuSlot& Engine::pu_slot(PuId id) {
    for (auto& server : pus_)
        for (auto& slot : server)
            if (slot.id == id) return slot;
    throw std::logic_error("unknown pu " + id.str());
}

void Engine::emit(SimTime t, EventKind kind, TaskId task, std::optional<PuId> pu) {
    trace_.push_back(Event{t, kind, task, pu});
}

rsp::ResourceView Engine::snapshot() const {
    rsp::ResourceView view;
    view.now = now_;
    view.servers = config_.topology.servers;
    for (std::size_t k = 0; k < view.servers.size(); ++k) {
        for (std::size_t j = 0; j < view.servers[k].pus.size(); ++j) {
            auto& pu = view.servers[k].pus[j];
            const auto& slot = pus_[k][j];
            pu.busy_until = slot.schedule.busy_until();
            pu.committed_load = slot.schedule.committed_load(now_);
            pu.reserved = slot.reserved;
        }
    }
    return view;
}

void Engine::step() {
    advance_executions();
    release_and_transmit();
    if (config_.screen_infeasible) screen_queue();
    assign_queue();
    if (config_.debug) check_tick();
    now_ += config_.tick;
}

void Engine::advance_executions() {
    for (auto& server : pus_) {
        for (auto& slot : server) {
            for (const auto& s : slot.schedule.slots()) {
                if (s.start > now_) break;
                auto& task = tasks_[index_of(s.task)];
                if (task.state == TaskState::Assigned) {
                    advance_state(task, TaskState::Running);
                    emit(s.start, EventKind::Started, task.id, slot.id);
                }
            }
            for (const auto& s : slot.schedule.drain(now_)) {
                auto& task = tasks_[index_of(s.task)];
                advance_state(task, TaskState::Completed);
                task.completion = s.finish;
                emit(s.finish, EventKind::Completed, task.id, slot.id);
                if (outcomes_[index_of(s.task)].via_pora) {
                    pora::release_reserved(reservation_, slot.id);
                    emit(s.finish, EventKind::PoraReleased, task.id, slot.id);
                }
                --remaining_;
            }
        }
    }
}

void Engine::release_and_transmit() {
    while (next_release_ < releases_.size() && releases_[next_release_].time <= now_) {
        const std::size_t i = index_of(releases_[next_release_].task);
        auto& task = tasks_[i];
        advance_state(task, TaskState::InTransit);
        emit(task.release, EventKind::TaskReleased, task.id);
        const auto& v = vehicles_.at(task.vehicle_id);
        outcomes_[i].delays.transmission =
            SimTime::from_units(timing::link_delay(task.file_size, {v.rsu_distance, v.rsu_bandwidth}));
        in_transit_.push_back(i);
        ++next_release_;
    }
    std::vector<std::size_t> still;
    for (std::size_t i : in_transit_) {
        auto& task = tasks_[i];
        const SimTime arrival = task.release + outcomes_[i].delays.transmission;
        if (arrival <= now_) {
            advance_state(task, TaskState::Queued);
            task.broker_arrival = arrival;
            emit(arrival, EventKind::BrokerArrival, task.id);
            queue_.push_back(i);
        } else {
            still.push_back(i);
        }
    }
    in_transit_ = std::move(still);
}

void Engine::screen_queue() {
    std::vector<std::size_t> kept;
    for (std::size_t i : queue_) {
        auto& task = tasks_[i];
        SimTime best = SimTime::max();
        for (std::size_t k = 0; k < pus_.size(); ++k) {
            double rate = 0.0;
            for (const auto& slot : pus_[k])
                if (!slot.reserved || config_.pora.enabled) rate = std::max(rate, slot.rate);
            if (rate <= 0.0) continue;
            const SimTime link = rsp::server_link_delay(task, config_.topology.servers[k]);
            best = min(best, now_ + link + timing::processing_time(task.workload, rate));
        }
        if (best > task.deadline) {
            mark_invalid(task, InvalidReason::ArrivalInfeasible);
        } else {
            kept.push_back(i);
        }
    }
    queue_ = std::move(kept);
}

void Engine::assign_queue() {
    if (queue_.empty()) return;
    tsp::QueueView qv;
    qv.now = now_;
    qv.max_rate = max_rate_;
    for (std::size_t i : queue_) {
        const auto& t = tasks_[i];
        qv.tasks.push_back({t.id, *t.broker_arrival, t.deadline, t.workload});
    }
    const auto order = tsp_.order_queue(qv);

    auto view = snapshot();
    for (TaskId id : order.order) {
        auto& task = tasks_[index_of(id)];
        const auto sel = rsp::select_pu(config_.rsp, task, view, random_rsp_);
        switch (sel.outcome) {
        case rsp::Outcome::Assign:
            commit(task, sel.pu, false, view);
            break;
        case rsp::Outcome::Escalate:
            if (auto d = pora::dispatch_urgent(reservation_, task, view)) {
                commit(task, d->pu, true, view);
            } else {
                mark_invalid(task, InvalidReason::NoReservedPu);
            }
            break;
        case rsp::Outcome::Invalid:
            mark_invalid(task, InvalidReason::NoFeasiblePu);
            break;
        }
    }
    queue_.clear();
}

void Engine::commit(Task& task, PuId pu, bool via_pora, rsp::ResourceView& view) {
    auto& slot = pu_slot(pu);
    const std::size_t k = static_cast<std::size_t>(
        std::find_if(view.servers.begin(), view.servers.end(), [&](const EdgeServer& s) { return s.id == pu.server; }) -
        view.servers.begin());
    const auto& server = config_.topology.servers[k];
    const SimTime link = rsp::server_link_delay(task, server);
    const SimTime processing = timing::processing_time(task.workload, slot.rate);
    const auto placed = slot.schedule.commit(task.id, now_ + link, processing);

    advance_state(task, TaskState::Assigned);
    task.assignment_time = now_;

    auto& out = outcomes_[index_of(task.id)];
    out.pu = pu;
    out.via_pora = via_pora;
    out.assignment = now_;
    out.start = placed.start;
    out.finish = placed.finish;
    out.delays.transmission += link;
    out.delays.broker_queue = placed.start - (task.release + out.delays.transmission);
    out.delays.processing = processing;

    emit(now_, EventKind::Assigned, task.id, pu);
    if (via_pora) emit(now_, EventKind::PoraDispatched, task.id, pu);

    for (auto& p : view.servers[k].pus) {
        if (p.id != pu) continue;
        p.busy_until = slot.schedule.busy_until();
        p.committed_load = slot.schedule.committed_load(now_);
    }
}

void Engine::mark_invalid(Task& task, InvalidReason reason) {
    advance_state(task, TaskState::Invalid);
    outcomes_[index_of(task.id)].reason = reason;
    emit(now_, EventKind::MarkedInvalid, task.id);
    --remaining_;
}

void Engine::check_tick() {
    const std::string at = " at t=" + now_.str();
    for (const auto& server : pus_) {
        for (const auto& slot : server) {
            const auto& slots = slot.schedule.slots();
            SimTime expected;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                const auto& out = outcomes_[index_of(slots[i].task)];
                if (out.finish > now_) expected += out.finish - max(out.start, now_);
                if (i > 0 && slots[i].start < slots[i - 1].finish)
                    violations_.push_back("pu " + slot.id.str() + ": overlapping slots" + at);
                if (out.via_pora != slot.reserved)
                    violations_.push_back("pu " + slot.id.str() + ": standby/normal pool mix-up" + at);
            }
            if (expected != slot.schedule.committed_load(now_))
                violations_.push_back("pu " + slot.id.str() + ": committed load mismatch" + at);
            if (slot.reserved && slots.size() > 1)
                violations_.push_back("pu " + slot.id.str() + ": standby PU holds more than one task" + at);
        }
    }
}

SimulationReport Engine::finish() {
    SimTime horizon;
    for (const auto& t : tasks_) horizon = max(horizon, t.deadline);
    horizon += config_.tick + config_.tick;
    while (!done()) {
        if (now_ > horizon) throw std::logic_error("engine did not terminate before the last deadline");
        step();
    }
    std::stable_sort(trace_.begin(), trace_.end(), [](const Event& a, const Event& b) { return a.time < b.time; });

    SimulationReport report;
    report.topology = config_.topology;
    report.tasks = tasks_;
    report.outcomes = outcomes_;
    report.trace = trace_;
    report.reserved = reservation_.reserved_pus();
    report.violations = violations_;
    if (config_.debug) {
        auto more = check_report(report);
        report.violations.insert(report.violations.end(), more.begin(), more.end());
    }
    return report;
}

SimulationReport run(EngineConfig config) {
    Engine engine(std::move(config));
    return engine.finish();
}

std::vector<std::string> check_report(const SimulationReport& report) {
    std::vector<std::string> v;
    std::map<PuId, double> rates;
    for (const auto& s : report.topology.servers)
        for (const auto& pu : s.pus) rates[pu.id] = pu.rate;
    const std::set<PuId> reserved(report.reserved.begin(), report.reserved.end());

    std::map<TaskId, int> terminal_events;
    for (std::size_t i = 0; i < report.trace.size(); ++i) {
        const auto& e = report.trace[i];
        if (i > 0 && e.time < report.trace[i - 1].time) v.push_back("trace not time-ordered at event " + std::to_string(i));
        if (e.kind == EventKind::Completed || e.kind == EventKind::MarkedInvalid) ++terminal_events[e.task];
    }

    std::map<PuId, std::vector<std::pair<SimTime, SimTime>>> intervals;
    std::size_t completed = 0, invalid = 0;
    for (std::size_t i = 0; i < report.tasks.size(); ++i) {
        const auto& t = report.tasks[i];
        const auto& o = report.outcomes[i];
        const std::string name = "task " + std::to_string(t.id);
        if (terminal_events[t.id] != 1) v.push_back(name + ": expected exactly one terminal event");
        if (t.state == TaskState::Invalid) {
            ++invalid;
            if (o.reason == InvalidReason::None) v.push_back(name + ": invalid without a reason");
            continue;
        }
        if (t.state != TaskState::Completed) {
            v.push_back(name + ": not terminal");
            continue;
        }
        ++completed;
        if (!o.pu || !t.completion) {
            v.push_back(name + ": completed without placement");
            continue;
        }
        if (*t.completion != o.finish) v.push_back(name + ": completion differs from slot finish");
        if (timing::completion_time(t, o.delays) != *t.completion)
            v.push_back(name + ": completion != release + td + bq + pro");
        if (*t.completion > t.deadline) v.push_back(name + ": completed after its deadline");
        if (o.delays.broker_queue < SimTime{} || o.delays.transmission < SimTime{})
            v.push_back(name + ": negative delay component");
        if (!t.broker_arrival || o.assignment < *t.broker_arrival) v.push_back(name + ": assigned before broker arrival");
        if (o.start < o.assignment) v.push_back(name + ": started before assignment");
        auto rate = rates.find(*o.pu);
        if (rate == rates.end()) {
            v.push_back(name + ": unknown pu");
        } else if (o.finish - o.start != timing::processing_time(t.workload, rate->second)) {
            v.push_back(name + ": execution interval differs from processing delay");
        }
        if (o.via_pora != (reserved.count(*o.pu) > 0)) v.push_back(name + ": standby/normal pool mix-up");
        intervals[*o.pu].push_back({o.start, o.finish});
    }
    if (completed + invalid != report.tasks.size()) v.push_back("completed + invalid != total tasks");

    for (auto& [pu, iv] : intervals) {
        std::sort(iv.begin(), iv.end());
        for (std::size_t i = 1; i < iv.size(); ++i)
            if (iv[i].first < iv[i - 1].second) v.push_back("pu " + pu.str() + ": overlapping executions");
    }
    return v;
}

void write_trace(std::ostream& out, const SimulationReport& report) {
    std::unordered_map<TaskId, std::size_t> index;
    for (std::size_t i = 0; i < report.tasks.size(); ++i) index[report.tasks[i].id] = i;
    for (const auto& e : report.trace) {
        out << "{\"t\":" << e.time.str() << ",\"kind\":\"" << to_string(e.kind) << "\",\"task\":" << e.task;
        if (e.pu) out << ",\"pu\":\"" << e.pu->str() << '"';
        if (e.kind == EventKind::Completed) {
            const std::size_t i = index.at(e.task);
            const auto& d = report.outcomes[i].delays;
            out << ",\"release\":" << report.tasks[i].release.str() << ",\"td\":" << d.transmission.str()
                << ",\"bq\":" << d.broker_queue.str() << ",\"pro\":" << d.processing.str();
        }
        if (e.kind == EventKind::MarkedInvalid) {
            out << ",\"reason\":\"" << to_string(report.outcomes[index.at(e.task)].reason) << '"';
        }
        out << "}\n";
    }
}

} // namespace sars::engine
