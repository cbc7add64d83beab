#include "sars/timing.hpp"

#include "sars/errors.hpp"

namespace sars::timing {

double link_delay(double file_size, Link link) {
    if (!(link.bandwidth > 0.0)) throw DomainError("link bandwidth must be > 0");
    return file_size / link.bandwidth * link.distance;
}

double transmission_delay(double file_size, Link vehicle_link, Link broker_link) {
    return link_delay(file_size, vehicle_link) + link_delay(file_size, broker_link);
}

double transmission_delay(const Task& task, Link vehicle_link, Link broker_link) {
    return transmission_delay(task.file_size, vehicle_link, broker_link);
}

double processing_delay(double workload, double rate) {
    if (!(rate > 0.0)) throw DomainError("processing rate must be > 0");
    return workload / rate;
}

double completion_time(double release, double transmission, double broker_queue, double processing) {
    return release + transmission + broker_queue + processing;
}

SimTime completion_time(const Task& task, const DelayBreakdown& d) {
    return task.release + d.transmission + d.broker_queue + d.processing;
}

SimTime processing_time(double workload, double rate) {
    return SimTime::from_units(processing_delay(workload, rate));
}

SimTime estimate_completion_on(const Task& task, const ProcessingUnit& pu, SimTime now, SimTime link) {
    return max(now + link, pu.busy_until) + processing_time(task.workload, pu.rate);
}

} // namespace sars::timing
