#pragma once

#include "sars/model.hpp"

#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sars::tsp {

enum class TspKind { FCFS, EDF, EDD, EFDF, CR, COVERT, ERA, PQM };

std::string_view to_string(TspKind kind);
std::optional<TspKind> parse_tsp(std::string_view name);

// Adapted constants for the dispatching rules. Thresholds are expressed as
// multiples of the best-case processing time.
struct TspParams {
    double covert_k = 2.0;     // COVERT look-ahead
    double era_high = 1.5;     // slack ratio below this -> high bucket
    double era_medium = 3.0;   // slack ratio below this -> medium bucket
    double pqm_critical = 2.0; // slack <= this * p -> critical

    void validate() const;

    friend bool operator==(const TspParams&, const TspParams&) = default;
};

struct QueuedTask {
    TaskId id = 0;
    SimTime broker_arrival;
    SimTime deadline;
    double workload = 0.0;
};

struct QueueView {
    SimTime now;
    std::vector<QueuedTask> tasks;
    double max_rate = 1.0; // fastest PU in the system, used for best-case estimates
};

struct QueueOrder {
    std::vector<TaskId> order;
    // EFDF only: order[infeasible_from..] cannot meet their deadline even in
    // the best case. Equals order.size() for every other policy.
    std::size_t infeasible_from = 0;
};

// Key helpers, exposed for tests and reports.
double best_case_processing(const QueuedTask& t, double max_rate);
double slack(const QueuedTask& t, SimTime now, double max_rate);
double critical_ratio(const QueuedTask& t, SimTime now, double max_rate);
double covert_index(const QueuedTask& t, SimTime now, double max_rate, double look_ahead);
int era_bucket(const QueuedTask& t, SimTime now, double max_rate, const TspParams& params); // 0 = high
bool pqm_is_critical(const QueuedTask& t, SimTime now, double max_rate, const TspParams& params);

// Orders the broker queue once per tick. Ties always fall back to
// (broker_arrival, id). Stateful only for EDD, which freezes a task's rank key
// the first time it sees it.
class TspPolicy {
public:
    explicit TspPolicy(TspKind kind, TspParams params = {});

    TspKind kind() const { return kind_; }
    const TspParams& params() const { return params_; }

    QueueOrder order_queue(const QueueView& view);

private:
    TspKind kind_;
    TspParams params_;
    std::unordered_map<TaskId, SimTime> edd_frozen_;
};

} // namespace sars::tsp
