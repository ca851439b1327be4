#ifndef EQSIM_HARNESS_REPORT_HPP
#define EQSIM_HARNESS_REPORT_HPP

#include <string>
#include <vector>

#include "eqsim/bounds.hpp"
#include "eqsim/harness/config.hpp"

namespace eqsim {

struct GapSummary {
    bool passed = false;
    int num_distinct_levels = 0;
    double min_gap_separation = 0.0;
    int num_collisions = 0;
};

struct TrialResult {
    int index = 0;
    std::string status;  // "ok" or "skipped_gap_check"
    int redraws = 0;
    GapSummary gap;

    double d_eff_omega = 0.0;
    double d_eff_omega_B = 0.0;
    double coupling_norm = 0.0;
    double horizon = 0.0;

    double mean_distance = 0.0;
    double stderr_distance = 0.0;
    double mean_speed = 0.0;
    double stderr_speed = 0.0;
    double natural_units_speed = 0.0;  // 0 when the coupling norm vanishes
    double max_speed = 0.0;
    double distance_rhs_bath = 0.0;    // auxiliary tighter distance bound

    std::vector<BoundVerdict> verdicts;

    // timing fields, excluded from report equality
    double wall_seconds = 0.0;
    double eigensolve_seconds = 0.0;

    bool ok() const { return status == "ok"; }
};

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct AggregateStats {
    int trials_total = 0;
    int trials_ok = 0;
    bool all_satisfied = true;
    Quartiles mean_distance;
    Quartiles mean_speed;
    Quartiles natural_units_speed;
    Quartiles d_eff_omega;
    Quartiles coupling_norm;
    // median slack per verdict name, ordered by first appearance
    std::vector<std::pair<std::string, double>> median_slack;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    AggregateStats aggregate;
    double total_wall_seconds = 0.0;

    bool all_satisfied() const { return aggregate.all_satisfied; }
};

Quartiles quartiles(std::vector<double> values);
AggregateStats compute_aggregate(const std::vector<TrialResult>& trials);

std::string serialize_report(const ExperimentReport& report);
ExperimentReport parse_report_text(const std::string& text);

void write_report(const ExperimentReport& report, const std::string& path);
ExperimentReport read_report(const std::string& path);

// Structural equality with timing fields ignored.
bool reports_equal_ignoring_timing(const ExperimentReport& a, const ExperimentReport& b);

}  // namespace eqsim

#endif
