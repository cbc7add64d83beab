#pragma once

#include "sars/engine.hpp"
#include "sars/metrics.hpp"
#include "sars/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace sars::expctl {

// Baselines get one cell per TSP (no escalation, alpha unused); sars gets one
// per (pora, alpha). Order: tsp, rsp, pora, alpha as listed in the scenario.
std::vector<metrics::PolicyPair> enumerate_cells(const Scenario& scenario);

// Topology and tasks depend only on the seed, so every cell of one seed sees
// the same instance. `tasks` replaces the generated workload when given.
engine::EngineConfig make_engine_config(const Scenario& scenario, const metrics::PolicyPair& cell, std::uint64_t seed,
                                        bool debug = false, const std::vector<Task>* tasks = nullptr);

struct SweepOptions {
    int seeds = 0;   // 0: use the scenario's seed count
    int workers = 0; // 0: SARS_WORKERS, else hardware concurrency
    bool debug = false;
    bool traces = false;
    std::filesystem::path out_dir; // empty: nothing is written
};

struct SweepResult {
    std::vector<metrics::CellRun> runs; // cell-major, then seed
    metrics::ComparisonTable table;
    std::size_t violations = 0;
    std::vector<std::string> violation_samples; // at most a few, prefixed by cell and seed
};

// Runs every (cell, seed) pair concurrently; output order never depends on
// scheduling. A failing cell aborts the sweep with a runtime_error naming it.
SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options);

int resolve_workers(int requested);

// Summary followed by the priority TSPs compared against their
// original resource policy and SARS.
void write_sweep_summary(std::ostream& out, const Scenario& scenario, const SweepResult& result);

} // namespace sars::expctl
