// Command-line front end. Talks to the simulator only through the C API.
#include "sars/sars.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

namespace {

struct ScenarioDeleter {
    void operator()(sars_scenario* s) const { sars_scenario_free(s); }
};
struct ReportDeleter {
    void operator()(sars_report* r) const { sars_report_free(r); }
};
struct SweepDeleter {
    void operator()(sars_sweep* s) const { sars_sweep_free(s); }
};

using ScenarioPtr = std::unique_ptr<sars_scenario, ScenarioDeleter>;

int report_error(sars_status status) {
    std::fprintf(stderr, "error [%s]: %s\n", sars_status_name(status), sars_last_error());
    return static_cast<int>(status);
}

sars_status open_scenario(const std::string& path, ScenarioPtr& out) {
    sars_scenario* raw = nullptr;
    const sars_status st = path.empty() ? sars_scenario_default(&raw) : sars_scenario_load(path.c_str(), &raw);
    out.reset(raw);
    return st;
}

sars_status set(sars_scenario* s, const char* key, const std::string& value) {
    if (value.empty()) return SARS_OK;
    return sars_scenario_set(s, key, value.c_str());
}

sars_status ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::fprintf(stderr, "error [io-error]: cannot create %s: %s\n", dir.c_str(), ec.message().c_str());
        return SARS_ERR_IO;
    }
    return SARS_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offloading simulator for deadline-constrained vehicle tasks on heterogeneous edge servers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sars_version());

    std::string scenario_path;
    std::string out;
    bool debug = false;

    // run
    auto* run = app.add_subcommand("run", "Run one policy pair on one seed");
    std::string tsp = "edf", rsp = "sars", pora, alpha, beta, beta_sign, pora_k, covert_k, seed, tasks;
    run->add_option("--scenario", scenario_path, "Scenario JSON (defaults when omitted)");
    run->add_option("--out", out, "Output directory for trace.ndjson and metrics.csv");
    run->add_option("--tsp", tsp, "fcfs|edf|edd|efdf|cr|covert|era|pqm")->capture_default_str();
    run->add_option("--rsp", rsp, "shortest|random|latest|sars")->capture_default_str();
    run->add_option("--pora", pora, "on|off");
    run->add_option("--pora-k", pora_k, "Candidate pool size for standby selection");
    run->add_option("--alpha", alpha, "Time-margin weight");
    run->add_option("--beta", beta, "Load-factor weight");
    run->add_option("--beta-sign", beta_sign, "plus|minus");
    run->add_option("--covert-k", covert_k, "COVERT look-ahead");
    run->add_option("--seed", seed, "Seed (defaults to the scenario's base seed)");
    run->add_option("--tasks", tasks, "Task CSV to use instead of the generated workload");
    run->add_flag("--debug", debug, "Check engine invariants");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run every policy cell over a seed set");
    int seeds = 0, workers = 0;
    bool traces = false;
    sweep->add_option("--scenario", scenario_path, "Scenario JSON (defaults when omitted)");
    sweep->add_option("--seeds", seeds, "Number of seeds (default: scenario)");
    sweep->add_option("--workers", workers, "Parallel runs (default: SARS_WORKERS or all cores)");
    sweep->add_option("--out", out, "Output directory")->required();
    sweep->add_flag("--traces", traces, "Write one trace per run");
    sweep->add_flag("--debug", debug, "Check engine invariants");

    // gen-workload
    auto* gen = app.add_subcommand("gen-workload", "Write the generated task set as CSV");
    std::uint64_t gen_seed = 1;
    gen->add_option("--scenario", scenario_path, "Scenario JSON (defaults when omitted)");
    gen->add_option("--seed", gen_seed, "Seed")->required();
    gen->add_option("--out", out, "CSV path")->required();

    // validate
    auto* val = app.add_subcommand("validate", "Check a scenario file");
    val->add_option("--scenario", scenario_path, "Scenario JSON")->required();

    CLI11_PARSE(app, argc, argv);

    ScenarioPtr scenario;
    if (auto st = open_scenario(scenario_path, scenario); st != SARS_OK) return report_error(st);

    if (val->parsed()) {
        if (auto st = sars_scenario_validate(scenario.get()); st != SARS_OK) return report_error(st);
        std::printf("ok\n");
        return 0;
    }

    if (gen->parsed()) {
        if (auto st = sars_workload_write_csv(scenario.get(), gen_seed, out.c_str()); st != SARS_OK)
            return report_error(st);
        return 0;
    }

    if (sweep->parsed()) {
        sars_sweep_options opts{seeds, workers, debug ? 1 : 0, traces ? 1 : 0};
        sars_sweep* raw = nullptr;
        const sars_status st = sars_sweep_run(scenario.get(), &opts, out.c_str(), &raw);
        std::unique_ptr<sars_sweep, SweepDeleter> result(raw);
        if (st != SARS_OK) return report_error(st);
        std::printf("%zu runs written to %s\n", sars_sweep_runs(result.get()), out.c_str());
        if (sars_sweep_violations(result.get()) > 0) {
            std::fprintf(stderr, "error [runtime-error]: %zu invariant violations\n", sars_sweep_violations(result.get()));
            return SARS_ERR_RUNTIME;
        }
        return 0;
    }

    // run
    for (auto [key, value] : {std::pair<const char*, const std::string*>{"tsp", &tsp},
                              {"rsp", &rsp},
                              {"pora", &pora},
                              {"pora_k", &pora_k},
                              {"alpha", &alpha},
                              {"beta", &beta},
                              {"beta_sign", &beta_sign},
                              {"covert_k", &covert_k},
                              {"seed", &seed},
                              {"tasks_csv", &tasks}}) {
        if (auto st = set(scenario.get(), key, *value); st != SARS_OK) return report_error(st);
    }
    sars_report* raw = nullptr;
    const sars_status st = sars_run(scenario.get(), debug ? 1 : 0, &raw);
    std::unique_ptr<sars_report, ReportDeleter> report(raw);
    if (st != SARS_OK) return report_error(st);

    std::printf("processed %zu of %zu tasks, TCR %.4f%%\n", sars_report_processed(report.get()),
                sars_report_total(report.get()), sars_report_tcr(report.get()));
    if (!out.empty()) {
        if (auto s = ensure_dir(out); s != SARS_OK) return s;
        const std::string trace = out + "/trace.ndjson";
        const std::string csv = out + "/metrics.csv";
        if (auto s = sars_report_write_trace(report.get(), trace.c_str()); s != SARS_OK) return report_error(s);
        if (auto s = sars_report_write_metrics(report.get(), csv.c_str()); s != SARS_OK) return report_error(s);
    }
    const size_t violations = sars_report_violations(report.get());
    for (size_t i = 0; i < violations && i < 10; ++i) std::fprintf(stderr, "violation: %s\n", sars_report_violation(report.get(), i));
    return violations > 0 ? SARS_ERR_RUNTIME : 0;
}
