#include "eqsim/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eqsim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(bool v) { return v ? "true" : "false"; }

// --- generic key-value block tree ---------------------------------------

struct KvNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> kv;
    std::vector<KvNode> children;

    const std::string& get(const std::string& key) const {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw std::runtime_error("report: missing key '" + key + "' in block '" + name + "'");
    }
    double get_double(const std::string& key) const { return std::strtod(get(key).c_str(), nullptr); }
    int get_int(const std::string& key) const { return std::stoi(get(key)); }
    bool get_bool(const std::string& key) const { return get(key) == "true"; }
};

void serialize_node(const KvNode& node, std::ostringstream& out, int depth) {
    const std::string pad(2 * depth, ' ');
    out << pad << node.name << " {\n";
    const std::string inner(2 * (depth + 1), ' ');
    for (const auto& [k, v] : node.kv) out << inner << k << " = " << v << "\n";
    for (const auto& child : node.children) serialize_node(child, out, depth + 1);
    out << pad << "}\n";
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

KvNode parse_tree(const std::string& text) {
    std::vector<KvNode> stack;
    stack.push_back(KvNode{"(root)", {}, {}});
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped == "}") {
            if (stack.size() < 2)
                throw std::runtime_error("report: unbalanced '}' on line " + std::to_string(line_no));
            KvNode done = std::move(stack.back());
            stack.pop_back();
            stack.back().children.push_back(std::move(done));
        } else if (stripped.size() > 1 && stripped.back() == '{') {
            stack.push_back(KvNode{trim(stripped.substr(0, stripped.size() - 1)), {}, {}});
        } else {
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("report: malformed line " + std::to_string(line_no));
            stack.back().kv.emplace_back(trim(stripped.substr(0, eq)),
                                         trim(stripped.substr(eq + 1)));
        }
    }
    if (stack.size() != 1) throw std::runtime_error("report: unterminated block");
    if (stack.front().children.size() != 1)
        throw std::runtime_error("report: expected a single top-level block");
    return std::move(stack.front().children.front());
}

// --- report <-> tree -----------------------------------------------------

KvNode verdict_node(const BoundVerdict& v) {
    KvNode node{"verdict", {}, {}};
    node.kv = {{"name", v.name},
               {"lhs", fmt(v.lhs_empirical)},
               {"lhs_stderr", fmt(v.lhs_stderr)},
               {"rhs", fmt(v.rhs_bound)},
               {"satisfied", fmt(v.satisfied)},
               {"slack_ratio", fmt(v.slack_ratio)},
               {"warning", v.warning}};
    return node;
}

BoundVerdict verdict_from_node(const KvNode& node) {
    BoundVerdict v;
    v.name = node.get("name");
    v.lhs_empirical = node.get_double("lhs");
    v.lhs_stderr = node.get_double("lhs_stderr");
    v.rhs_bound = node.get_double("rhs");
    v.satisfied = node.get_bool("satisfied");
    v.slack_ratio = node.get_double("slack_ratio");
    v.warning = node.get("warning");
    return v;
}

KvNode trial_node(const TrialResult& t) {
    KvNode node{"trial", {}, {}};
    node.kv = {{"index", std::to_string(t.index)},
               {"status", t.status},
               {"redraws", std::to_string(t.redraws)},
               {"gap.passed", fmt(t.gap.passed)},
               {"gap.num_distinct_levels", std::to_string(t.gap.num_distinct_levels)},
               {"gap.min_gap_separation", fmt(t.gap.min_gap_separation)},
               {"gap.num_collisions", std::to_string(t.gap.num_collisions)},
               {"d_eff_omega", fmt(t.d_eff_omega)},
               {"d_eff_omega_B", fmt(t.d_eff_omega_B)},
               {"coupling_norm", fmt(t.coupling_norm)},
               {"horizon", fmt(t.horizon)},
               {"mean_distance", fmt(t.mean_distance)},
               {"stderr_distance", fmt(t.stderr_distance)},
               {"mean_speed", fmt(t.mean_speed)},
               {"stderr_speed", fmt(t.stderr_speed)},
               {"natural_units_speed", fmt(t.natural_units_speed)},
               {"max_speed", fmt(t.max_speed)},
               {"distance_rhs_bath", fmt(t.distance_rhs_bath)},
               {"timing.wall_seconds", fmt(t.wall_seconds)},
               {"timing.eigensolve_seconds", fmt(t.eigensolve_seconds)}};
    for (const auto& v : t.verdicts) node.children.push_back(verdict_node(v));
    return node;
}

TrialResult trial_from_node(const KvNode& node) {
    TrialResult t;
    t.index = node.get_int("index");
    t.status = node.get("status");
    t.redraws = node.get_int("redraws");
    t.gap.passed = node.get_bool("gap.passed");
    t.gap.num_distinct_levels = node.get_int("gap.num_distinct_levels");
    t.gap.min_gap_separation = node.get_double("gap.min_gap_separation");
    t.gap.num_collisions = node.get_int("gap.num_collisions");
    t.d_eff_omega = node.get_double("d_eff_omega");
    t.d_eff_omega_B = node.get_double("d_eff_omega_B");
    t.coupling_norm = node.get_double("coupling_norm");
    t.horizon = node.get_double("horizon");
    t.mean_distance = node.get_double("mean_distance");
    t.stderr_distance = node.get_double("stderr_distance");
    t.mean_speed = node.get_double("mean_speed");
    t.stderr_speed = node.get_double("stderr_speed");
    t.natural_units_speed = node.get_double("natural_units_speed");
    t.max_speed = node.get_double("max_speed");
    t.distance_rhs_bath = node.get_double("distance_rhs_bath");
    t.wall_seconds = node.get_double("timing.wall_seconds");
    t.eigensolve_seconds = node.get_double("timing.eigensolve_seconds");
    for (const auto& child : node.children)
        if (child.name == "verdict") t.verdicts.push_back(verdict_from_node(child));
    return t;
}

void add_quartiles(KvNode& node, const std::string& prefix, const Quartiles& q) {
    node.kv.emplace_back(prefix + ".q1", fmt(q.q1));
    node.kv.emplace_back(prefix + ".median", fmt(q.median));
    node.kv.emplace_back(prefix + ".q3", fmt(q.q3));
}

Quartiles quartiles_from(const KvNode& node, const std::string& prefix) {
    Quartiles q;
    q.q1 = node.get_double(prefix + ".q1");
    q.median = node.get_double(prefix + ".median");
    q.q3 = node.get_double(prefix + ".q3");
    return q;
}

}  // namespace

Quartiles quartiles(std::vector<double> values) {
    Quartiles q;
    if (values.empty()) return q;
    std::sort(values.begin(), values.end());
    // linear interpolation between order statistics
    auto at = [&](double p) {
        const double pos = p * (static_cast<double>(values.size()) - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        // no interpolation across equal or infinite order statistics
        if (frac == 0.0 || values[lo] == values[hi]) return values[lo];
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    q.q1 = at(0.25);
    q.median = at(0.5);
    q.q3 = at(0.75);
    return q;
}

AggregateStats compute_aggregate(const std::vector<TrialResult>& trials) {
    AggregateStats agg;
    agg.trials_total = static_cast<int>(trials.size());
    std::vector<double> dist, speed, natural, d_eff, coupling;
    std::vector<std::string> names;
    std::vector<std::vector<double>> slacks;
    for (const auto& t : trials) {
        if (!t.ok()) continue;
        ++agg.trials_ok;
        dist.push_back(t.mean_distance);
        speed.push_back(t.mean_speed);
        natural.push_back(t.natural_units_speed);
        d_eff.push_back(t.d_eff_omega);
        coupling.push_back(t.coupling_norm);
        for (const auto& v : t.verdicts) {
            if (!v.satisfied) agg.all_satisfied = false;
            auto it = std::find(names.begin(), names.end(), v.name);
            if (it == names.end()) {
                names.push_back(v.name);
                slacks.emplace_back();
                it = names.end() - 1;
            }
            slacks[static_cast<std::size_t>(it - names.begin())].push_back(v.slack_ratio);
        }
    }
    agg.mean_distance = quartiles(dist);
    agg.mean_speed = quartiles(speed);
    agg.natural_units_speed = quartiles(natural);
    agg.d_eff_omega = quartiles(d_eff);
    agg.coupling_norm = quartiles(coupling);
    for (std::size_t i = 0; i < names.size(); ++i)
        agg.median_slack.emplace_back(names[i], quartiles(slacks[i]).median);
    return agg;
}

std::string serialize_report(const ExperimentReport& report) {
    KvNode root{"experiment_report", {}, {}};

    KvNode config{"config", {}, {}};
    std::stringstream cfg(serialize_config(report.config));
    std::string line;
    while (std::getline(cfg, line)) {
        const auto eq = line.find('=');
        config.kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    root.children.push_back(std::move(config));

    for (const auto& t : report.trials) root.children.push_back(trial_node(t));

    KvNode agg{"aggregate", {}, {}};
    agg.kv.emplace_back("trials_total", std::to_string(report.aggregate.trials_total));
    agg.kv.emplace_back("trials_ok", std::to_string(report.aggregate.trials_ok));
    agg.kv.emplace_back("all_satisfied", fmt(report.aggregate.all_satisfied));
    add_quartiles(agg, "mean_distance", report.aggregate.mean_distance);
    add_quartiles(agg, "mean_speed", report.aggregate.mean_speed);
    add_quartiles(agg, "natural_units_speed", report.aggregate.natural_units_speed);
    add_quartiles(agg, "d_eff_omega", report.aggregate.d_eff_omega);
    add_quartiles(agg, "coupling_norm", report.aggregate.coupling_norm);
    for (const auto& [name, slack] : report.aggregate.median_slack)
        agg.kv.emplace_back("median_slack." + name, fmt(slack));
    root.children.push_back(std::move(agg));

    KvNode timing{"timing", {}, {}};
    timing.kv.emplace_back("total_wall_seconds", fmt(report.total_wall_seconds));
    root.children.push_back(std::move(timing));

    std::ostringstream out;
    serialize_node(root, out, 0);
    return out.str();
}

ExperimentReport parse_report_text(const std::string& text) {
    const KvNode root = parse_tree(text);
    if (root.name != "experiment_report")
        throw std::runtime_error("report: expected experiment_report block");

    ExperimentReport report;
    for (const auto& child : root.children) {
        if (child.name == "config") {
            std::ostringstream cfg;
            for (const auto& [k, v] : child.kv) cfg << k << " = " << v << "\n";
            report.config = parse_config_text(cfg.str());
        } else if (child.name == "trial") {
            report.trials.push_back(trial_from_node(child));
        } else if (child.name == "aggregate") {
            report.aggregate.trials_total = child.get_int("trials_total");
            report.aggregate.trials_ok = child.get_int("trials_ok");
            report.aggregate.all_satisfied = child.get_bool("all_satisfied");
            report.aggregate.mean_distance = quartiles_from(child, "mean_distance");
            report.aggregate.mean_speed = quartiles_from(child, "mean_speed");
            report.aggregate.natural_units_speed = quartiles_from(child, "natural_units_speed");
            report.aggregate.d_eff_omega = quartiles_from(child, "d_eff_omega");
            report.aggregate.coupling_norm = quartiles_from(child, "coupling_norm");
            for (const auto& [k, v] : child.kv)
                if (k.rfind("median_slack.", 0) == 0)
                    report.aggregate.median_slack.emplace_back(k.substr(13),
                                                               std::strtod(v.c_str(), nullptr));
        } else if (child.name == "timing") {
            report.total_wall_seconds = child.get_double("total_wall_seconds");
        }
    }
    return report;
}

void write_report(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report file for writing: " + path);
    out << serialize_report(report);
    if (!out) throw std::runtime_error("failed while writing report: " + path);
}

ExperimentReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_report_text(buffer.str());
}

bool reports_equal_ignoring_timing(const ExperimentReport& a, const ExperimentReport& b) {
    ExperimentReport ca = a;
    ExperimentReport cb = b;
    for (auto* r : {&ca, &cb}) {
        r->total_wall_seconds = 0;
        for (auto& t : r->trials) {
            t.wall_seconds = 0;
            t.eigensolve_seconds = 0;
        }
    }
    return serialize_report(ca) == serialize_report(cb);
}

}  // namespace eqsim
