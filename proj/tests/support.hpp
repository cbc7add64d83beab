#pragma once

#include "sars/engine.hpp"
#include "sars/model.hpp"
#include "sars/rng.hpp"
#include "sars/rsp.hpp"

#include <cmath>
#include <vector>

namespace sars::test {

inline SimTime T(double units) { return SimTime::from_units(units); }

inline Task make_task(TaskId id, double release, double deadline, double workload, double size = 1.0,
                      int vehicle = 0) {
    Task t;
    t.id = id;
    t.vehicle_id = vehicle;
    t.release = T(release);
    t.deadline = T(deadline);
    t.workload = workload;
    t.file_size = size;
    return t;
}

inline EdgeServer make_server(int id, const std::vector<double>& rates, double broker_distance = 0.0,
                              double broker_bandwidth = 100.0) {
    EdgeServer s;
    s.id = id;
    s.broker_distance = broker_distance;
    s.broker_bandwidth = broker_bandwidth;
    for (std::size_t j = 0; j < rates.size(); ++j) {
        ProcessingUnit pu;
        pu.id = {id, static_cast<int>(j)};
        pu.rate = rates[j];
        s.pus.push_back(pu);
    }
    return s;
}

// Zero-distance topology: one vehicle, one RSU, the given servers.
inline Topology flat_topology(std::vector<EdgeServer> servers) {
    Topology t;
    t.vehicles.push_back(Vehicle{0, 0, 0.0, 100.0});
    t.rsus.push_back(Rsu{0});
    t.servers = std::move(servers);
    t.min_distance = 0.0;
    return t;
}

inline bool close_rel(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Random instance for selection oracles. Loads and busy times are quantized
// the same way the engine would produce them.
struct Instance {
    Task task;
    rsp::ResourceView view;
};

inline Instance random_instance(Rng& rng, bool with_reserved = false) {
    Instance in;
    in.view.now = SimTime::whole_units(rng.integer(0, 100));
    const int servers = static_cast<int>(rng.integer(1, 4));
    for (int k = 0; k < servers; ++k) {
        EdgeServer s;
        s.id = k;
        s.broker_distance = rng.uniform(0.0, 250.0);
        s.broker_bandwidth = 100.0;
        const int n = static_cast<int>(rng.integer(1, 12));
        const int standby = with_reserved && n > 1 ? static_cast<int>(rng.integer(0, n - 1)) : -1;
        for (int j = 0; j < n; ++j) {
            ProcessingUnit pu;
            pu.id = {k, j};
            pu.rate = rng.uniform(0.5, 1.2);
            // Mix idle PUs with backlogged ones; equal loads exercise tie-breaks.
            const auto backlog = rng.integer(0, 3) == 0 ? 0 : rng.integer(0, 40);
            pu.committed_load = SimTime::whole_units(backlog);
            pu.busy_until = in.view.now + pu.committed_load;
            pu.reserved = j == standby;
            s.pus.push_back(pu);
        }
        in.view.servers.push_back(s);
    }
    const double workload = std::round(rng.uniform(1.0, 30.0) * 10.0) / 10.0;
    in.task = make_task(1, 0.0, in.view.now.units() + rng.uniform(0.0, 80.0), workload, rng.uniform(1.0, 5.0));
    in.task.deadline = SimTime::from_units(in.task.deadline.units());
    return in;
}

} // namespace sars::test
