#include "sars/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace sars::metrics {

RunMetrics compute_tcr(const engine::SimulationReport& report) {
    RunMetrics m;
    m.total = static_cast<int>(report.tasks.size());
    int groups = 0;
    for (const auto& t : report.tasks) groups = std::max(groups, t.group);
    m.group_total.assign(static_cast<std::size_t>(groups), 0);
    m.group_processed.assign(static_cast<std::size_t>(groups), 0);

    int assigned = 0;
    for (std::size_t i = 0; i < report.tasks.size(); ++i) {
        const auto& t = report.tasks[i];
        const auto& o = report.outcomes[i];
        const auto g = static_cast<std::size_t>(t.group - 1);
        ++m.group_total[g];
        if (task_is_processed(t)) {
            ++m.n_pt;
            ++m.group_processed[g];
        }
        if (o.pu) {
            ++assigned;
            m.mean_transmission += o.delays.transmission.units();
            m.mean_broker_queue += o.delays.broker_queue.units();
            m.mean_processing += o.delays.processing.units();
        }
        if (t.state == TaskState::Invalid) {
            switch (o.reason) {
            case engine::InvalidReason::NoFeasiblePu: ++m.invalid_no_feasible; break;
            case engine::InvalidReason::NoReservedPu: ++m.invalid_no_reserved; break;
            case engine::InvalidReason::ArrivalInfeasible: ++m.invalid_arrival; break;
            case engine::InvalidReason::None: break;
            }
        }
    }
    if (assigned > 0) {
        m.mean_transmission /= assigned;
        m.mean_broker_queue /= assigned;
        m.mean_processing /= assigned;
    }
    m.reserved = report.reserved;
    m.tcr = m.total > 0 ? 100.0 * m.n_pt / m.total : 0.0;
    for (std::size_t g = 0; g < m.group_total.size(); ++g)
        m.group_tcr.push_back(m.group_total[g] > 0 ? 100.0 * m.group_processed[g] / m.group_total[g] : 0.0);
    return m;
}

namespace {

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

bool same_family(const PolicyPair& a, const PolicyPair& b) { return a.tsp == b.tsp; }

} // namespace

std::string PolicyPair::label() const {
    std::string s = std::string(tsp::to_string(tsp)) + "/" + std::string(rsp::to_string(rsp));
    if (rsp == rsp::RspKind::SARS) {
        s += pora ? "+pora" : "";
        s += " a=" + fmt(alpha, 2) + " b=" + fmt(beta, 2) + (beta_sign > 0 ? "" : " (penalty)");
    }
    return s;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_t_test: size mismatch");
    PairedTest r;
    r.n = static_cast<int>(a.size());
    if (r.n == 0) return r;
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= r.n;
    r.mean_diff = mean;
    if (r.n < 2) {
        r.p_one_sided = mean > 0.0 ? 0.0 : 1.0;
        return r;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    const double sd = std::sqrt(ss / (r.n - 1));
    if (sd == 0.0) {
        r.t = mean > 0.0 ? INFINITY : (mean < 0.0 ? -INFINITY : 0.0);
        r.p_one_sided = mean > 0.0 ? 0.0 : 1.0;
        return r;
    }
    r.t = mean / (sd / std::sqrt(static_cast<double>(r.n)));
    boost::math::students_t dist(r.n - 1);
    r.p_one_sided = boost::math::cdf(boost::math::complement(dist, r.t));
    return r;
}

std::vector<std::pair<std::uint64_t, double>> cell_series(std::span<const CellRun> runs, const PolicyPair& cell) {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto& r : runs)
        if (r.cell == cell) out.emplace_back(r.seed, r.metrics.tcr);
    std::sort(out.begin(), out.end());
    return out;
}

ComparisonTable aggregate(std::span<const CellRun> runs) {
    ComparisonTable table;
    std::vector<std::vector<double>> values;
    for (const auto& r : runs) {
        auto it = std::find_if(table.cells.begin(), table.cells.end(),
                               [&](const CellSummary& c) { return c.cell == r.cell; });
        std::size_t idx;
        if (it == table.cells.end()) {
            table.cells.push_back(CellSummary{r.cell});
            values.emplace_back();
            idx = table.cells.size() - 1;
        } else {
            idx = static_cast<std::size_t>(it - table.cells.begin());
        }
        values[idx].push_back(r.metrics.tcr);
    }
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        auto& c = table.cells[i];
        const auto& v = values[i];
        c.runs = static_cast<int>(v.size());
        double sum = 0.0;
        for (double x : v) sum += x;
        c.mean = sum / c.runs;
        double ss = 0.0;
        for (double x : v) ss += (x - c.mean) * (x - c.mean);
        c.sd = std::sqrt(ss / c.runs);
        c.min = *std::min_element(v.begin(), v.end());
        c.max = *std::max_element(v.begin(), v.end());
    }

    for (const auto& s : table.cells) {
        if (s.cell.rsp != rsp::RspKind::SARS) continue;
        for (const auto& b : table.cells) {
            if (b.cell.rsp == rsp::RspKind::SARS || !same_family(s.cell, b.cell)) continue;
            Delta d;
            d.sars = s.cell;
            d.baseline = b.cell;
            d.delta = s.mean - b.mean;
            const auto sa = cell_series(runs, s.cell);
            const auto sb = cell_series(runs, b.cell);
            std::map<std::uint64_t, double> bm(sb.begin(), sb.end());
            std::vector<double> xa, xb;
            for (const auto& [seed, tcr] : sa) {
                auto it = bm.find(seed);
                if (it == bm.end()) continue;
                xa.push_back(tcr);
                xb.push_back(it->second);
            }
            d.test = paired_t_test(xa, xb);
            table.deltas.push_back(d);
        }
    }
    return table;
}

const CellSummary& find_cell(const ComparisonTable& table, const PolicyPair& cell) {
    for (const auto& c : table.cells)
        if (c.cell == cell) return c;
    throw std::out_of_range("no cell " + cell.label());
}

void write_metrics_csv(std::ostream& out, std::span<const CellRun> runs) {
    std::size_t groups = 0;
    for (const auto& r : runs) groups = std::max(groups, r.metrics.group_tcr.size());
    out << "tsp,rsp,pora,alpha,beta,beta_sign,seed,total,processed,tcr";
    for (std::size_t g = 1; g <= groups; ++g) out << ",tcr_g" << g;
    out << ",invalid_no_feasible,invalid_no_reserved,invalid_arrival,mean_td,mean_bq,mean_pro,reserved\n";
    for (const auto& r : runs) {
        const auto& m = r.metrics;
        out << tsp::to_string(r.cell.tsp) << ',' << rsp::to_string(r.cell.rsp) << ',' << (r.cell.pora ? "on" : "off")
            << ',' << fmt(r.cell.alpha) << ',' << fmt(r.cell.beta) << ',' << (r.cell.beta_sign > 0 ? "plus" : "minus")
            << ',' << r.seed << ',' << m.total << ',' << m.n_pt << ',' << fmt(m.tcr);
        for (std::size_t g = 0; g < groups; ++g) out << ',' << (g < m.group_tcr.size() ? fmt(m.group_tcr[g]) : "");
        out << ',' << m.invalid_no_feasible << ',' << m.invalid_no_reserved << ',' << m.invalid_arrival << ','
            << fmt(m.mean_transmission) << ',' << fmt(m.mean_broker_queue) << ',' << fmt(m.mean_processing) << ',';
        for (std::size_t i = 0; i < m.reserved.size(); ++i) out << (i ? ";" : "") << m.reserved[i].str();
        out << '\n';
    }
}

void write_summary(std::ostream& out, const ComparisonTable& table) {
    out << "# TCR per cell over seeds (percent; sd is the population standard deviation)\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-40s %5s %9s %8s %9s %9s\n", "cell", "runs", "mean", "sd", "min", "max");
    out << line;
    for (const auto& c : table.cells) {
        std::snprintf(line, sizeof line, "%-40s %5d %9.4f %8.4f %9.4f %9.4f\n", c.cell.label().c_str(), c.runs,
                      c.mean, c.sd, c.min, c.max);
        out << line;
    }
    out << "\n# SARS minus baseline (same TSP); p is a paired one-sided t-test\n";
    std::snprintf(line, sizeof line, "%-40s %-24s %9s %9s %9s\n", "sars cell", "baseline", "delta", "t", "p");
    out << line;
    for (const auto& d : table.deltas) {
        std::snprintf(line, sizeof line, "%-40s %-24s %9.4f %9.3f %9.4f\n", d.sars.label().c_str(),
                      d.baseline.label().c_str(), d.delta, d.test.t, d.test.p_one_sided);
        out << line;
    }
}

} // namespace sars::metrics
