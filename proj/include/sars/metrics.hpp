#pragma once

#include "sars/engine.hpp"
#include "sars/rsp.hpp"
#include "sars/tsp.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sars::metrics {

struct RunMetrics {
    int total = 0;
    int n_pt = 0;  // processed tasks
    double tcr = 0.0; // percent
    std::vector<int> group_total;     // index g-1
    std::vector<int> group_processed; // index g-1
    std::vector<double> group_tcr;    // index g-1, percent
    double mean_transmission = 0.0;   // over assigned tasks
    double mean_broker_queue = 0.0;
    double mean_processing = 0.0;
    int invalid_no_feasible = 0;
    int invalid_no_reserved = 0;
    int invalid_arrival = 0;
    std::vector<PuId> reserved; // standby PUs of the run
};

// Groups are numbered from 1; the group vectors cover 1..max group seen.
RunMetrics compute_tcr(const engine::SimulationReport& report);

// One experimental cell.
struct PolicyPair {
    tsp::TspKind tsp = tsp::TspKind::EDF;
    rsp::RspKind rsp = rsp::RspKind::SARS;
    bool pora = false;
    double alpha = 1.0;
    double beta = 0.5;
    int beta_sign = +1;

    std::string label() const;
    friend bool operator==(const PolicyPair&, const PolicyPair&) = default;
};

struct CellRun {
    PolicyPair cell;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct CellSummary {
    PolicyPair cell;
    int runs = 0;
    double mean = 0.0;
    double sd = 0.0; // population
    double min = 0.0;
    double max = 0.0;
};

struct PairedTest {
    int n = 0;
    double mean_diff = 0.0;
    double t = 0.0;
    double p_one_sided = 1.0; // H1: mean_diff > 0
};

// Paired one-sided t-test on a[i] - b[i]. With zero variance the p-value is 0
// for a positive mean difference and 1 otherwise.
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

// SARS cell minus a baseline cell of the same TSP, paired over shared seeds.
struct Delta {
    PolicyPair sars;
    PolicyPair baseline;
    double delta = 0.0; // difference of cell means
    PairedTest test;
};

struct ComparisonTable {
    std::vector<CellSummary> cells; // first-seen order of the input
    std::vector<Delta> deltas;
};

ComparisonTable aggregate(std::span<const CellRun> runs);

// Mean TCR of one cell; throws std::out_of_range if absent.
const CellSummary& find_cell(const ComparisonTable& table, const PolicyPair& cell);
// Per-seed TCRs of one cell ordered by seed.
std::vector<std::pair<std::uint64_t, double>> cell_series(std::span<const CellRun> runs, const PolicyPair& cell);

// tsp,rsp,pora,alpha,beta,beta_sign,seed,total,processed,tcr,tcr_g1..tcr_gN,
// invalid_no_feasible,invalid_no_reserved,invalid_arrival,mean_td,mean_bq,mean_pro,reserved
void write_metrics_csv(std::ostream& out, std::span<const CellRun> runs);

void write_summary(std::ostream& out, const ComparisonTable& table);

} // namespace sars::metrics
