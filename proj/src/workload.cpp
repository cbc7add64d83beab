#include "sars/workload.hpp"

#include "sars/errors.hpp"
#include "sars/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sars::workload {

WorkloadPlan WorkloadPlan::defaults() {
    WorkloadPlan plan;
    plan.groups = {
        GroupSpec{1, {0, 40}, {1, 10}, {1, 10}, {1, 5}, 200},
        GroupSpec{2, {0, 70}, {1, 10}, {1, 10}, {1, 5}, 200},
        GroupSpec{3, {0, 40}, {1, 20}, {1, 10}, {1, 5}, 200},
        GroupSpec{4, {0, 70}, {1, 20}, {1, 10}, {1, 5}, 200},
    };
    return plan;
}

namespace {

void check_range(const Range& r, const std::string& name, bool positive) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi || r.lo < 0.0)
        throw ConfigError(name, "range must satisfy 0 <= lo <= hi");
    if (positive && !(r.lo > 0.0)) throw ConfigError(name, "range must be strictly positive");
}

} // namespace

void WorkloadPlan::validate() const {
    if (groups.empty()) throw ConfigError("workload.groups", "no groups");
    if (vehicles <= 0) throw ConfigError("workload.vehicles", "must be > 0");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const std::string name = "workload.groups[" + std::to_string(i) + "]";
        if (g.group != static_cast<int>(i) + 1) throw ConfigError(name, "groups must be numbered 1..n in order");
        check_range(g.release, name + ".release", false);
        check_range(g.slack, name + ".slack", true);
        // workload is rounded to 0.1 MI, so the lower bound must survive rounding
        check_range(g.workload, name + ".workload", true);
        if (std::ceil(g.workload.lo * 10.0 - 1e-9) / 10.0 > g.workload.hi)
            throw ConfigError(name + ".workload", "range contains no multiple of 0.1");
        if (g.workload.lo < 0.1) throw ConfigError(name + ".workload", "lower bound must be >= 0.1");
        check_range(g.size, name + ".size", true);
        if (g.count <= 0) throw ConfigError(name + ".count", "must be > 0");
    }
}

int WorkloadPlan::total() const {
    int n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
}

namespace {

// Round to 0.1 and clamp into the range so rounding never leaves it.
double round_workload(double w, Range r) {
    double v = std::round(w * 10.0) / 10.0;
    const double lo = std::ceil(r.lo * 10.0 - 1e-9) / 10.0;
    const double hi = std::floor(r.hi * 10.0 + 1e-9) / 10.0;
    return std::clamp(v, lo, hi);
}

SimTime draw_time(Rng& rng, Range r) {
    auto t = SimTime::from_units(rng.uniform(r.lo, r.hi));
    return std::clamp(t, SimTime::from_units(r.lo), SimTime::from_units(r.hi));
}

} // namespace

std::vector<Task> generate(const WorkloadPlan& plan, std::uint64_t seed) {
    plan.validate();
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(plan.total()));
    TaskId next_id = 0;
    for (const auto& g : plan.groups) {
        Rng rng(seed, Stream::WorkloadGroup, static_cast<std::uint64_t>(g.group));
        for (int i = 0; i < g.count; ++i) {
            Task t;
            t.id = next_id;
            t.vehicle_id = static_cast<int>(next_id % plan.vehicles);
            t.group = g.group;
            t.release = draw_time(rng, g.release);
            t.workload = round_workload(rng.uniform(g.workload.lo, g.workload.hi), g.workload);
            t.slack = draw_time(rng, g.slack);
            t.file_size = draw_time(rng, g.size).units();
            t.deadline = t.release + SimTime::from_units(t.workload) + t.slack;
            tasks.push_back(t);
            ++next_id;
        }
    }
    std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
        return a.release != b.release ? a.release < b.release : a.id < b.id;
    });
    return tasks;
}

std::vector<ReleaseEvent> release_events(std::span<const Task> tasks, SimTime tick) {
    std::vector<ReleaseEvent> events;
    events.reserve(tasks.size());
    for (const auto& t : tasks) {
        std::int64_t n = t.release.quanta() / tick.quanta();
        if (n * tick.quanta() < t.release.quanta()) ++n;
        events.push_back({SimTime::from_quanta(n * tick.quanta()), t.id});
    }
    return events;
}

void write_csv(std::ostream& out, std::span<const Task> tasks) {
    out << "id,vehicle,group,release,deadline,workload,size\n";
    for (const auto& t : tasks) {
        out << t.id << ',' << t.vehicle_id << ',' << t.group << ',' << t.release.str() << ','
            << t.deadline.str() << ',' << SimTime::from_units(t.workload).str() << ','
            << SimTime::from_units(t.file_size).str() << '\n';
    }
}

namespace {

double parse_number(const std::string& field, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError("tasks csv: bad number '" + field + "'", line);
    }
}

} // namespace

std::vector<Task> read_csv(std::istream& in) {
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line)) throw ParseError("tasks csv: empty input", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,vehicle,group,release,deadline,workload,size")
        throw ParseError("tasks csv: unexpected header '" + line + "'", 1);
    std::vector<Task> tasks;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 7) throw ParseError("tasks csv: expected 7 fields", line_no);
        Task t;
        t.id = static_cast<TaskId>(parse_number(fields[0], line_no));
        t.vehicle_id = static_cast<int>(parse_number(fields[1], line_no));
        t.group = static_cast<int>(parse_number(fields[2], line_no));
        t.release = SimTime::from_units(parse_number(fields[3], line_no));
        t.deadline = SimTime::from_units(parse_number(fields[4], line_no));
        t.workload = parse_number(fields[5], line_no);
        t.file_size = parse_number(fields[6], line_no);
        t.slack = t.deadline - t.release - SimTime::from_units(t.workload);
        if (t.release < SimTime{}) throw ParseError("tasks csv: negative release", line_no);
        if (!(t.deadline > t.release)) throw ParseError("tasks csv: deadline must exceed release", line_no);
        if (!(t.workload > 0.0) || !(t.file_size > 0.0))
            throw ParseError("tasks csv: workload and size must be > 0", line_no);
        tasks.push_back(t);
    }
    std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
        return a.release != b.release ? a.release < b.release : a.id < b.id;
    });
    return tasks;
}

} // namespace sars::workload
