#include "sars/sars.h"

#include "sars/errors.hpp"
#include "sars/metrics.hpp"
#include "sars/scenario.hpp"
#include "sars/sweep.hpp"
#include "sars/workload.hpp"

#include <cstring>
#include <fstream>
#include <optional>
#include <string>

struct sars_scenario {
    sars::expctl::Scenario scenario;
    sars::metrics::PolicyPair cell{sars::tsp::TspKind::EDF, sars::rsp::RspKind::SARS, false, 1.0, 0.5, +1};
    std::optional<std::uint64_t> seed;
    std::string tasks_csv;

    void sync_cell_defaults() {
        cell.alpha = scenario.policies.alphas.front();
        cell.beta = scenario.policies.beta;
        cell.beta_sign = scenario.policies.beta_sign;
    }
};

struct sars_report {
    sars::engine::SimulationReport report;
    sars::metrics::CellRun run;
};

struct sars_sweep {
    sars::expctl::SweepResult result;
};

namespace {

thread_local std::string g_last_error;

sars_status fail(sars_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Maps the exception currently in flight onto a status code.
sars_status translate() {
    try {
        throw;
    } catch (const sars::ParseError& e) {
        std::string msg = e.what();
        if (e.line() > 0) msg += " (line " + std::to_string(e.line()) + ")";
        return fail(SARS_ERR_PARSE, msg);
    } catch (const sars::ConfigError& e) {
        return fail(SARS_ERR_VALIDATION, e.what());
    } catch (const sars::DomainError& e) {
        return fail(SARS_ERR_VALIDATION, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(SARS_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(SARS_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(SARS_ERR_RUNTIME, "unknown error");
    }
}

template <class F>
sars_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (...) {
        return translate();
    }
}

std::vector<sars::Task> read_tasks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::filesystem::filesystem_error("cannot open task file", path, std::make_error_code(std::errc::no_such_file_or_directory));
    return sars::workload::read_csv(in);
}

double parse_double(const char* value, const char* key) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used == std::strlen(value)) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string(key) + ": expected a number, got '" + value + "'");
}

} // namespace

extern "C" {

const char* sars_version(void) { return "1.0.0"; }

const char* sars_last_error(void) { return g_last_error.c_str(); }

const char* sars_status_name(sars_status status) {
    switch (status) {
    case SARS_OK: return "ok";
    case SARS_ERR_ARGUMENT: return "argument-error";
    case SARS_ERR_PARSE: return "parse-error";
    case SARS_ERR_VALIDATION: return "validation-error";
    case SARS_ERR_IO: return "io-error";
    case SARS_ERR_RUNTIME: return "runtime-error";
    }
    return "unknown";
}

sars_status sars_scenario_default(sars_scenario** out) {
    if (!out) return fail(SARS_ERR_ARGUMENT, "out is null");
    return guarded([&] {
        auto* s = new sars_scenario{};
        s->scenario = sars::expctl::default_scenario();
        s->sync_cell_defaults();
        *out = s;
        return SARS_OK;
    });
}

sars_status sars_scenario_load(const char* path, sars_scenario** out) {
    if (!path || !out) return fail(SARS_ERR_ARGUMENT, "null argument");
    if (!std::filesystem::exists(path)) return fail(SARS_ERR_IO, std::string("no such file: ") + path);
    return guarded([&] {
        auto* s = new sars_scenario{};
        s->scenario = sars::expctl::load_scenario(path);
        s->sync_cell_defaults();
        *out = s;
        return SARS_OK;
    });
}

sars_status sars_scenario_parse(const char* json_text, sars_scenario** out) {
    if (!json_text || !out) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        auto* s = new sars_scenario{};
        s->scenario = sars::expctl::parse_scenario(json_text);
        s->sync_cell_defaults();
        *out = s;
        return SARS_OK;
    });
}

sars_status sars_scenario_validate(const sars_scenario* scenario) {
    if (!scenario) return fail(SARS_ERR_ARGUMENT, "scenario is null");
    return guarded([&] {
        sars::expctl::validate(scenario->scenario);
        return SARS_OK;
    });
}

sars_status sars_scenario_to_json(const sars_scenario* scenario, char** out) {
    if (!scenario || !out) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string text = sars::expctl::to_json(scenario->scenario);
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
        return SARS_OK;
    });
}

void sars_scenario_free(sars_scenario* scenario) { delete scenario; }

void sars_string_free(char* s) { delete[] s; }

sars_status sars_scenario_set(sars_scenario* scenario, const char* key, const char* value) {
    if (!scenario || !key || !value) return fail(SARS_ERR_ARGUMENT, "null argument");
    try {
        g_last_error.clear();
        const std::string k = key;
        const std::string v = value;
        auto& cell = scenario->cell;
        auto& policies = scenario->scenario.policies;
        if (k == "tsp") {
            auto t = sars::tsp::parse_tsp(v);
            if (!t) return fail(SARS_ERR_ARGUMENT, "unknown task selection policy '" + v + "'");
            cell.tsp = *t;
        } else if (k == "rsp") {
            auto r = sars::rsp::parse_rsp(v);
            if (!r) return fail(SARS_ERR_ARGUMENT, "unknown resource selection policy '" + v + "'");
            cell.rsp = *r;
        } else if (k == "pora") {
            if (v != "on" && v != "off") return fail(SARS_ERR_ARGUMENT, "pora: expected on or off");
            cell.pora = v == "on";
        } else if (k == "alpha") {
            cell.alpha = parse_double(value, key);
        } else if (k == "beta") {
            cell.beta = parse_double(value, key);
        } else if (k == "beta_sign") {
            if (v != "plus" && v != "minus") return fail(SARS_ERR_ARGUMENT, "beta_sign: expected plus or minus");
            cell.beta_sign = v == "plus" ? +1 : -1;
        } else if (k == "pora_k") {
            policies.pora_k = static_cast<int>(parse_double(value, key));
        } else if (k == "covert_k") {
            policies.tsp_params.covert_k = parse_double(value, key);
        } else if (k == "seed") {
            std::size_t used = 0;
            const auto seed = std::stoull(v, &used);
            if (used != v.size()) return fail(SARS_ERR_ARGUMENT, "seed: expected an integer");
            scenario->seed = seed;
        } else if (k == "tasks_csv") {
            scenario->tasks_csv = v;
        } else {
            return fail(SARS_ERR_ARGUMENT, "unknown key '" + k + "'");
        }
        return SARS_OK;
    } catch (const std::exception& e) {
        return fail(SARS_ERR_ARGUMENT, e.what());
    }
}

sars_status sars_run(const sars_scenario* scenario, int debug, sars_report** out) {
    if (!scenario || !out) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto seed = scenario->seed.value_or(scenario->scenario.seeds.base);
        std::optional<std::vector<sars::Task>> tasks;
        if (!scenario->tasks_csv.empty()) tasks = read_tasks(scenario->tasks_csv);
        auto cfg = sars::expctl::make_engine_config(scenario->scenario, scenario->cell, seed, debug != 0,
                                                    tasks ? &*tasks : nullptr);
        auto* r = new sars_report{};
        try {
            r->report = sars::engine::run(std::move(cfg));
            r->run = sars::metrics::CellRun{scenario->cell, seed, sars::metrics::compute_tcr(r->report)};
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
        return SARS_OK;
    });
}

size_t sars_report_total(const sars_report* report) { return report ? report->report.tasks.size() : 0; }

size_t sars_report_processed(const sars_report* report) {
    return report ? static_cast<size_t>(report->run.metrics.n_pt) : 0;
}

double sars_report_tcr(const sars_report* report) { return report ? report->run.metrics.tcr : 0.0; }

size_t sars_report_violations(const sars_report* report) { return report ? report->report.violations.size() : 0; }

const char* sars_report_violation(const sars_report* report, size_t i) {
    if (!report || i >= report->report.violations.size()) return nullptr;
    return report->report.violations[i].c_str();
}

sars_status sars_report_write_trace(const sars_report* report, const char* path) {
    if (!report || !path) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) return fail(SARS_ERR_IO, std::string("cannot write ") + path);
        sars::engine::write_trace(out, report->report);
        return out ? SARS_OK : fail(SARS_ERR_IO, std::string("write failed: ") + path);
    });
}

sars_status sars_report_write_metrics(const sars_report* report, const char* csv_path) {
    if (!report || !csv_path) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) return fail(SARS_ERR_IO, std::string("cannot write ") + csv_path);
        sars::metrics::write_metrics_csv(out, std::span(&report->run, 1));
        return out ? SARS_OK : fail(SARS_ERR_IO, std::string("write failed: ") + csv_path);
    });
}

void sars_report_free(sars_report* report) { delete report; }

sars_status sars_sweep_run(const sars_scenario* scenario, const sars_sweep_options* options, const char* out_dir,
                           sars_sweep** out) {
    if (!scenario || !out) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        sars::expctl::SweepOptions opts;
        if (options) {
            opts.seeds = options->seeds;
            opts.workers = options->workers;
            opts.debug = options->debug != 0;
            opts.traces = options->write_traces != 0;
        }
        if (out_dir) opts.out_dir = out_dir;
        auto* s = new sars_sweep{};
        try {
            s->result = sars::expctl::run_sweep(scenario->scenario, opts);
        } catch (...) {
            delete s;
            throw;
        }
        *out = s;
        return SARS_OK;
    });
}

size_t sars_sweep_runs(const sars_sweep* sweep) { return sweep ? sweep->result.runs.size() : 0; }

size_t sars_sweep_violations(const sars_sweep* sweep) { return sweep ? sweep->result.violations : 0; }

void sars_sweep_free(sars_sweep* sweep) { delete sweep; }

sars_status sars_workload_write_csv(const sars_scenario* scenario, uint64_t seed, const char* path) {
    if (!scenario || !path) return fail(SARS_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto tasks = sars::workload::generate(scenario->scenario.workload, seed);
        std::ofstream out(path, std::ios::binary);
        if (!out) return fail(SARS_ERR_IO, std::string("cannot write ") + path);
        sars::workload::write_csv(out, tasks);
        return out ? SARS_OK : fail(SARS_ERR_IO, std::string("write failed: ") + path);
    });
}

} // extern "C"
