#include "sars/scenario.hpp"

#include "sars/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sars::expctl {

using nlohmann::json;

std::vector<std::uint64_t> SeedSet::seeds(int override_count) const {
    const int n = override_count > 0 ? override_count : count;
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
    return out;
}

Scenario default_scenario() {
    using tsp::TspKind;
    using rsp::RspKind;
    Scenario s;
    s.workload = workload::WorkloadPlan::defaults();
    s.workload.vehicles = s.topology.vehicles;
    s.policies.tsps = {TspKind::FCFS, TspKind::EDF, TspKind::EDD, TspKind::EFDF,
                       TspKind::CR,   TspKind::COVERT, TspKind::ERA, TspKind::PQM};
    s.policies.rsps = {RspKind::ShortestExecution, RspKind::Random, RspKind::LatestFeasible, RspKind::SARS};
    s.policies.pora = {false, true};
    s.policies.alphas = {1.0};
    s.policies.original_rsp = {{TspKind::ERA, RspKind::ShortestExecution}, {TspKind::PQM, RspKind::ShortestExecution}};
    return s;
}

void validate(const Scenario& s) {
    s.topology.validate();
    if (!(s.area_width_km > 0.0) || !(s.area_height_km > 0.0)) throw ConfigError("area_km", "must be > 0");
    const double diagonal_m = 1000.0 * std::hypot(s.area_width_km, s.area_height_km);
    if (s.topology.max_distance > diagonal_m) throw ConfigError("topology.distance", "exceeds the area diagonal");
    s.workload.validate();
    if (s.workload.vehicles != s.topology.vehicles)
        throw ConfigError("workload.vehicles", "must match topology.vehicles");

    const auto& p = s.policies;
    if (p.tsps.empty()) throw ConfigError("policies.tsp", "empty");
    if (p.rsps.empty()) throw ConfigError("policies.rsp", "empty");
    if (p.pora.empty()) throw ConfigError("policies.pora", "empty");
    if (p.alphas.empty()) throw ConfigError("policies.alpha", "empty");
    p.tsp_params.validate();
    for (double a : p.alphas) {
        rsp::RspPolicy probe{rsp::RspKind::SARS, a, p.beta, p.beta_sign, false};
        probe.validate();
    }
    if (p.pora_k < 1) throw ConfigError("policies.pora_k", "must be >= 1");
    if (std::find(p.pora.begin(), p.pora.end(), true) != p.pora.end() || p.reserve_when_off) {
        if (s.topology.min_pus <= p.pora_k)
            throw ConfigError("policies.pora_k", "every server needs more than pora_k PUs");
    }
    if (s.seeds.count <= 0) throw ConfigError("seeds.count", "must be > 0");
}

namespace {

int line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Reads fields out of one JSON object and rejects leftovers.
class Fields {
public:
    Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ParseError(path_ + ": expected an object");
    }

    ~Fields() noexcept(false) {
        if (std::uncaught_exceptions()) return;
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) throw ParseError(path_ + "." + it.key() + ": unknown key");
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string at(const std::string& key) const { return path_ + "." + key; }

    void number(const std::string& key, double& out) {
        if (auto v = get(key)) {
            if (!v->is_number()) throw ParseError(at(key) + ": expected a number");
            out = v->get<double>();
        }
    }

    void integer(const std::string& key, int& out) {
        if (auto v = get(key)) {
            if (!v->is_number_integer()) throw ParseError(at(key) + ": expected an integer");
            out = v->get<int>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (auto v = get(key)) {
            if (!v->is_boolean()) throw ParseError(at(key) + ": expected true or false");
            out = v->get<bool>();
        }
    }

    void pair(const std::string& key, double& lo, double& hi) {
        if (auto v = get(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
                throw ParseError(at(key) + ": expected [lo, hi]");
            lo = (*v)[0].get<double>();
            hi = (*v)[1].get<double>();
        }
    }

    void int_pair(const std::string& key, int& lo, int& hi) {
        if (auto v = get(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() || !(*v)[1].is_number_integer())
                throw ParseError(at(key) + ": expected [lo, hi] integers");
            lo = (*v)[0].get<int>();
            hi = (*v)[1].get<int>();
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

tsp::TspKind tsp_named(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": expected a policy name");
    auto k = tsp::parse_tsp(v.get<std::string>());
    if (!k) throw ParseError(where + ": unknown task selection policy '" + v.get<std::string>() + "'");
    return *k;
}

rsp::RspKind rsp_named(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": expected a policy name");
    auto k = rsp::parse_rsp(v.get<std::string>());
    if (!k) throw ParseError(where + ": unknown resource selection policy '" + v.get<std::string>() + "'");
    return *k;
}

int beta_sign_named(const json& v, const std::string& where) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "plus") return +1;
        if (s == "minus") return -1;
    }
    throw ParseError(where + ": expected \"plus\" or \"minus\"");
}

void read_topology(const json& j, Scenario& s) {
    Fields f(j, "topology");
    auto& t = s.topology;
    f.integer("vehicles", t.vehicles);
    f.integer("rsus", t.rsus);
    f.integer("servers", t.servers);
    f.int_pair("pus", t.min_pus, t.max_pus);
    f.pair("pu_rate", t.min_rate, t.max_rate);
    f.pair("distance", t.min_distance, t.max_distance);
    f.pair("area_km", s.area_width_km, s.area_height_km);
    f.number("vehicle_bandwidth", t.vehicle_bandwidth);
    f.number("broker_bandwidth", t.broker_bandwidth);
    s.workload.vehicles = t.vehicles;
}

void read_workload(const json& j, Scenario& s) {
    Fields f(j, "workload");
    if (auto groups = f.get("groups")) {
        if (!groups->is_array()) throw ParseError("workload.groups: expected an array");
        const auto defaults = workload::WorkloadPlan::defaults().groups;
        std::vector<workload::GroupSpec> out;
        for (std::size_t i = 0; i < groups->size(); ++i) {
            const std::string path = "workload.groups[" + std::to_string(i) + "]";
            workload::GroupSpec g = i < defaults.size() ? defaults[i] : workload::GroupSpec{};
            g.group = static_cast<int>(i) + 1;
            Fields gf((*groups)[i], path);
            if (i >= defaults.size()) {
                for (const char* key : {"release", "slack", "workload", "size", "count"})
                    if (!(*groups)[i].contains(key)) throw ParseError(path + "." + key + ": required beyond the default groups");
            }
            gf.integer("group", g.group);
            gf.pair("release", g.release.lo, g.release.hi);
            gf.pair("slack", g.slack.lo, g.slack.hi);
            gf.pair("workload", g.workload.lo, g.workload.hi);
            gf.pair("size", g.size.lo, g.size.hi);
            gf.integer("count", g.count);
            out.push_back(g);
        }
        s.workload.groups = std::move(out);
    }
}

void read_policies(const json& j, Scenario& s) {
    Fields f(j, "policies");
    auto& p = s.policies;
    if (auto v = f.get("tsp")) {
        if (!v->is_array()) throw ParseError(f.at("tsp") + ": expected an array");
        p.tsps.clear();
        for (const auto& e : *v) p.tsps.push_back(tsp_named(e, f.at("tsp")));
    }
    if (auto v = f.get("rsp")) {
        if (!v->is_array()) throw ParseError(f.at("rsp") + ": expected an array");
        p.rsps.clear();
        for (const auto& e : *v) p.rsps.push_back(rsp_named(e, f.at("rsp")));
    }
    if (auto v = f.get("pora")) {
        if (!v->is_array()) throw ParseError(f.at("pora") + ": expected an array of booleans");
        p.pora.clear();
        for (const auto& e : *v) {
            if (!e.is_boolean()) throw ParseError(f.at("pora") + ": expected an array of booleans");
            p.pora.push_back(e.get<bool>());
        }
    }
    if (auto v = f.get("alpha")) {
        if (!v->is_array()) throw ParseError(f.at("alpha") + ": expected an array of numbers");
        p.alphas.clear();
        for (const auto& e : *v) {
            if (!e.is_number()) throw ParseError(f.at("alpha") + ": expected an array of numbers");
            p.alphas.push_back(e.get<double>());
        }
    }
    f.number("beta", p.beta);
    if (auto v = f.get("beta_sign")) p.beta_sign = beta_sign_named(*v, f.at("beta_sign"));
    f.number("covert_k", p.tsp_params.covert_k);
    f.number("era_high", p.tsp_params.era_high);
    f.number("era_medium", p.tsp_params.era_medium);
    f.number("pqm_critical", p.tsp_params.pqm_critical);
    f.integer("pora_k", p.pora_k);
    f.boolean("reserve_when_off", p.reserve_when_off);
    if (auto v = f.get("original_rsp")) {
        if (!v->is_object()) throw ParseError(f.at("original_rsp") + ": expected an object");
        p.original_rsp.clear();
        for (auto it = v->begin(); it != v->end(); ++it) {
            const auto where = f.at("original_rsp") + "." + it.key();
            p.original_rsp[tsp_named(json(it.key()), where)] = rsp_named(it.value(), where);
        }
    }
}

void read_seeds(const json& j, Scenario& s) {
    Fields f(j, "seeds");
    if (auto v = f.get("base")) {
        if (!v->is_number_unsigned()) throw ParseError("seeds.base: expected a non-negative integer");
        s.seeds.base = v->get<std::uint64_t>();
    }
    f.integer("count", s.seeds.count);
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return default_scenario();
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    Scenario s = default_scenario();
    if (root.is_null()) return s; // empty document "null"
    try {
        Fields f(root, "scenario");
        if (auto v = f.get("topology")) read_topology(*v, s);
        if (auto v = f.get("workload")) read_workload(*v, s);
        if (auto v = f.get("policies")) read_policies(*v, s);
        if (auto v = f.get("screen_infeasible")) {
            if (!v->is_boolean()) throw ParseError("scenario.screen_infeasible: expected true or false");
            s.screen_infeasible = v->get<bool>();
        }
        if (auto v = f.get("seeds")) read_seeds(*v, s);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    // An empty file means "all defaults".
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return default_scenario();
    return parse_scenario(text);
}

std::string to_json(const Scenario& s) {
    json j;
    const auto& t = s.topology;
    j["topology"] = {
        {"vehicles", t.vehicles},
        {"rsus", t.rsus},
        {"servers", t.servers},
        {"pus", {t.min_pus, t.max_pus}},
        {"pu_rate", {t.min_rate, t.max_rate}},
        {"distance", {t.min_distance, t.max_distance}},
        {"area_km", {s.area_width_km, s.area_height_km}},
        {"vehicle_bandwidth", t.vehicle_bandwidth},
        {"broker_bandwidth", t.broker_bandwidth},
    };
    json groups = json::array();
    for (const auto& g : s.workload.groups) {
        groups.push_back({
            {"group", g.group},
            {"release", {g.release.lo, g.release.hi}},
            {"slack", {g.slack.lo, g.slack.hi}},
            {"workload", {g.workload.lo, g.workload.hi}},
            {"size", {g.size.lo, g.size.hi}},
            {"count", g.count},
        });
    }
    j["workload"] = {{"groups", groups}};
    const auto& p = s.policies;
    json tsps = json::array(), rsps = json::array(), orig = json::object();
    for (auto k : p.tsps) tsps.push_back(std::string(tsp::to_string(k)));
    for (auto k : p.rsps) rsps.push_back(std::string(rsp::to_string(k)));
    for (const auto& [k, r] : p.original_rsp) orig[std::string(tsp::to_string(k))] = std::string(rsp::to_string(r));
    j["policies"] = {
        {"tsp", tsps},
        {"rsp", rsps},
        {"pora", p.pora},
        {"alpha", p.alphas},
        {"beta", p.beta},
        {"beta_sign", p.beta_sign > 0 ? "plus" : "minus"},
        {"covert_k", p.tsp_params.covert_k},
        {"era_high", p.tsp_params.era_high},
        {"era_medium", p.tsp_params.era_medium},
        {"pqm_critical", p.tsp_params.pqm_critical},
        {"pora_k", p.pora_k},
        {"reserve_when_off", p.reserve_when_off},
        {"original_rsp", orig},
    };
    j["screen_infeasible"] = s.screen_infeasible;
    j["seeds"] = {{"base", s.seeds.base}, {"count", s.seeds.count}};
    return j.dump(2) + "\n";
}

} // namespace sars::expctl
