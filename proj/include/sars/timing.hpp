#pragma once

#include "sars/model.hpp"

namespace sars::timing {

struct Link {
    double distance = 0.0;
    double bandwidth = 1.0;
};

// Per-task delay components. All non-negative.
struct DelayBreakdown {
    SimTime transmission;
    SimTime broker_queue;
    SimTime processing;
};

// One hop: size / bandwidth * distance. Throws DomainError if bandwidth <= 0.
double link_delay(double file_size, Link link);

// Vehicle->RSU hop plus broker->server hop.
double transmission_delay(double file_size, Link vehicle_link, Link broker_link);
double transmission_delay(const Task& task, Link vehicle_link, Link broker_link);

// workload / rate. Throws DomainError if rate <= 0.
double processing_delay(double workload, double rate);

double completion_time(double release, double transmission, double broker_queue, double processing);
SimTime completion_time(const Task& task, const DelayBreakdown& delays);

// Earliest finish of `task` on `pu` if committed at `now`. The task cannot
// start before it reaches the server (`link` after now) nor before the PU has
// drained its committed work.
SimTime estimate_completion_on(const Task& task, const ProcessingUnit& pu, SimTime now, SimTime link = {});

// Quantized processing delay, shared by estimates and execution.
SimTime processing_time(double workload, double rate);

} // namespace sars::timing
