#include "sars/sweep.hpp"

#include "sars/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

namespace sars::expctl {

std::vector<metrics::PolicyPair> enumerate_cells(const Scenario& s) {
    const auto& p = s.policies;
    std::vector<metrics::PolicyPair> cells;
    for (auto t : p.tsps) {
        for (auto r : p.rsps) {
            metrics::PolicyPair cell{t, r, false, p.alphas.front(), p.beta, p.beta_sign};
            if (r != rsp::RspKind::SARS) {
                cells.push_back(cell);
                continue;
            }
            for (bool pora : p.pora) {
                for (double a : p.alphas) {
                    cell.pora = pora;
                    cell.alpha = a;
                    cells.push_back(cell);
                }
            }
        }
    }
    return cells;
}

engine::EngineConfig make_engine_config(const Scenario& s, const metrics::PolicyPair& cell, std::uint64_t seed,
                                        bool debug, const std::vector<Task>* tasks) {
    engine::EngineConfig cfg;
    cfg.topology = generate_topology(s.topology, seed);
    cfg.tasks = tasks ? *tasks : workload::generate(s.workload, seed);
    cfg.tsp = cell.tsp;
    cfg.tsp_params = s.policies.tsp_params;
    cfg.rsp = rsp::RspPolicy{cell.rsp, cell.alpha, cell.beta, cell.beta_sign, cell.pora};
    cfg.pora.enabled = cell.pora;
    cfg.pora.k = s.policies.pora_k;
    cfg.pora.reserve_when_disabled = s.policies.reserve_when_off && cell.rsp == rsp::RspKind::SARS;
    cfg.seed = seed;
    cfg.screen_infeasible = s.screen_infeasible;
    cfg.debug = debug;
    return cfg;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SARS_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

std::string trace_name(const metrics::PolicyPair& c, std::uint64_t seed) {
    std::string name = std::string(tsp::to_string(c.tsp)) + "_" + std::string(rsp::to_string(c.rsp));
    if (c.rsp == rsp::RspKind::SARS) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "_pora-%s_a%.3f", c.pora ? "on" : "off", c.alpha);
        name += buf;
    }
    return name + "_seed" + std::to_string(seed) + ".ndjson";
}

} // namespace

SweepResult run_sweep(const Scenario& scenario, const SweepOptions& options) {
    validate(scenario);
    const auto cells = enumerate_cells(scenario);
    const auto seeds = scenario.seeds.seeds(options.seeds);
    const std::size_t jobs = cells.size() * seeds.size();

    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
        if (options.traces) std::filesystem::create_directories(options.out_dir / "traces");
    }

    SweepResult result;
    result.runs.resize(jobs);
    std::vector<std::vector<std::string>> violations(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < jobs; i = next++) {
            const auto& cell = cells[i / seeds.size()];
            const auto seed = seeds[i % seeds.size()];
            try {
                auto report = engine::run(make_engine_config(scenario, cell, seed, options.debug));
                result.runs[i] = metrics::CellRun{cell, seed, metrics::compute_tcr(report)};
                violations[i] = report.violations;
                if (options.traces && !options.out_dir.empty()) {
                    std::ofstream out(options.out_dir / "traces" / trace_name(cell, seed));
                    engine::write_trace(out, report);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int workers = std::min<int>(resolve_workers(options.workers), static_cast<int>(std::max<std::size_t>(jobs, 1)));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < jobs; ++i) {
        if (!errors[i]) continue;
        const std::string where =
            "cell " + cells[i / seeds.size()].label() + " seed " + std::to_string(seeds[i % seeds.size()]);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.entity(), e.rule());
        } catch (const std::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }

    for (std::size_t i = 0; i < jobs; ++i) {
        result.violations += violations[i].size();
        for (const auto& v : violations[i]) {
            if (result.violation_samples.size() >= 20) break;
            result.violation_samples.push_back(result.runs[i].cell.label() + " seed " +
                                               std::to_string(result.runs[i].seed) + ": " + v);
        }
    }
    result.table = metrics::aggregate(result.runs);

    if (!options.out_dir.empty()) {
        std::ofstream csv(options.out_dir / "metrics.csv");
        metrics::write_metrics_csv(csv, result.runs);
        std::ofstream summary(options.out_dir / "summary.txt");
        write_sweep_summary(summary, scenario, result);
        if (!csv || !summary) throw std::runtime_error("failed writing sweep outputs to " + options.out_dir.string());
    }
    return result;
}

void write_sweep_summary(std::ostream& out, const Scenario& scenario, const SweepResult& result) {
    const auto& p = scenario.policies;
    out << "# seeds: " << (result.runs.empty() ? 0 : metrics::cell_series(result.runs, result.runs.front().cell).size())
        << " starting at " << scenario.seeds.base << "\n";
    out << "# load factor term: " << (p.beta_sign > 0 ? "plus (as in the score formula)" : "minus (penalty mode)")
        << ", beta=" << p.beta << ", pora_k=" << p.pora_k << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "# adapted constants: covert_k=%.3g era=(%.3g, %.3g) pqm_critical=%.3g\n",
                  p.tsp_params.covert_k, p.tsp_params.era_high, p.tsp_params.era_medium, p.tsp_params.pqm_critical);
    out << buf;
    out << "# invariant violations: " << result.violations << "\n\n";
    metrics::write_summary(out, result.table);

    bool header = false;
    for (const auto& [tsp_kind, original] : p.original_rsp) {
        for (const auto& d : result.table.deltas) {
            if (d.sars.tsp != tsp_kind || d.baseline.rsp != original) continue;
            if (!header) {
                out << "\n# priority-based TSPs: SARS vs their original resource policy\n";
                header = true;
            }
            std::snprintf(buf, sizeof buf, "%-40s vs %-24s delta %8.4f  p %.4f\n", d.sars.label().c_str(),
                          d.baseline.label().c_str(), d.delta, d.test.p_one_sided);
            out << buf;
        }
    }
}

} // namespace sars::expctl
