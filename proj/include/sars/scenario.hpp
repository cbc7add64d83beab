#pragma once

#include "sars/model.hpp"
#include "sars/rsp.hpp"
#include "sars/tsp.hpp"
#include "sars/workload.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sars::expctl {

struct PolicySweep {
    std::vector<tsp::TspKind> tsps;
    std::vector<rsp::RspKind> rsps;
    std::vector<bool> pora;       // only applied to sars cells
    std::vector<double> alphas;   // only applied to sars cells
    double beta = 0.5;
    int beta_sign = +1;
    tsp::TspParams tsp_params;
    int pora_k = 3;
    bool reserve_when_off = false;
    // Resource policy each priority-based TSP shipped with.
    std::map<tsp::TspKind, rsp::RspKind> original_rsp;

    friend bool operator==(const PolicySweep&, const PolicySweep&) = default;
};

struct SeedSet {
    std::uint64_t base = 1;
    int count = 30;

    std::vector<std::uint64_t> seeds(int override_count = 0) const;
    friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

struct Scenario {
    TopologySpec topology;
    double area_width_km = 0.7;
    double area_height_km = 0.7;
    workload::WorkloadPlan workload;
    PolicySweep policies;
    bool screen_infeasible = true;
    SeedSet seeds;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// 0.7 x 0.7 km, 4 vehicles, 2 RSUs, 4 servers of 8-12 PUs at 0.5-1.2 MI per
// unit, distances 50-250 m, four 200-task groups, every policy, 30 seeds.
Scenario default_scenario();

// Throws ConfigError on the first violated rule.
void validate(const Scenario& scenario);

// Omitted keys keep their defaults; unknown keys are rejected. Throws
// ParseError (with line) for malformed JSON or wrongly typed values and
// ConfigError for values that fail validation.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

std::string to_json(const Scenario& scenario);

} // namespace sars::expctl
