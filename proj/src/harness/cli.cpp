#include "eqsim/harness/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "eqsim/harness/experiment.hpp"
#include "eqsim/harness/selftest.hpp"

namespace eqsim {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsatisfied = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
    int threads = 1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_config = true) {
    if (with_config)
        cmd->add_option("config", flags.config_path, "experiment config file")->required();
    cmd->add_option("--seed", flags.seed, "override the config seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out_dir, "override the config output directory");
    cmd->add_option("--threads", flags.threads, "number of parallel trial workers")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--quiet", flags.quiet, "suppress progress output");
}

ExperimentConfig load_config(const CommonFlags& flags) {
    ExperimentConfig config = parse_config_file(flags.config_path);
    if (flags.seed_set) config.seed = flags.seed;
    if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
    config.validate();
    return config;
}

void parse_axis(const std::string& spec, SweepAxis& axis, std::vector<double>& values) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw config_error("sweep: --axis expects <name>=<v1,v2,...>, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    if (name == "bath_dim") axis = SweepAxis::bath_dim;
    else if (name == "lambda") axis = SweepAxis::lambda;
    else throw config_error("sweep: unknown axis '" + name + "'");
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string item =
            rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) {
            try {
                values.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw config_error("sweep: bad axis value '" + item + "'");
            }
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw config_error("sweep: empty axis value list");
}

void print_report_summary(const ExperimentReport& report) {
    const auto& agg = report.aggregate;
    std::printf("trials: %d ok / %d total; bounds %s\n", agg.trials_ok, agg.trials_total,
                agg.all_satisfied ? "satisfied" : "VIOLATED");
    std::printf("median mean distance %.6g, median mean speed %.6g, median natural-units speed "
                "%.6g, median d_eff %.6g\n",
                agg.mean_distance.median, agg.mean_speed.median, agg.natural_units_speed.median,
                agg.d_eff_omega.median);
    for (const auto& [name, slack] : agg.median_slack)
        std::printf("  median slack %-28s %.6g\n", name.c_str(), slack);
    std::printf("report: %s/report.txt\n", report.config.output_dir.c_str());
}

int cmd_run(const CommonFlags& flags) {
    const ExperimentConfig config = load_config(flags);
    const ExperimentReport report =
        run_experiment(config, RunOptions{flags.threads, flags.quiet});
    if (!flags.quiet) print_report_summary(report);
    return report.all_satisfied() ? kExitOk : kExitUnsatisfied;
}

int cmd_sweep(const CommonFlags& flags, const std::string& axis_spec) {
    ExperimentConfig base = load_config(flags);
    SweepAxis axis{};
    std::vector<double> values;
    parse_axis(axis_spec, axis, values);
    const auto reports = run_sweep(base, axis, values, RunOptions{flags.threads, flags.quiet});
    bool all = true;
    for (std::size_t p = 0; p < reports.size(); ++p) {
        if (!flags.quiet) {
            std::printf("axis point %.6g: ", values[p]);
            print_report_summary(reports[p]);
        }
        all = all && reports[p].all_satisfied();
    }
    if (!flags.quiet) std::printf("sweep summary: %s/sweep_summary.txt\n", base.output_dir.c_str());
    return all ? kExitOk : kExitUnsatisfied;
}

int cmd_check_gaps(const CommonFlags& flags) {
    const ExperimentConfig config = load_config(flags);
    const auto results = run_gap_checks(config);
    bool all = true;
    for (const auto& r : results) {
        std::printf("trial %d: D=%d levels=%d %s min_gap_separation=%.6g collisions=%d "
                    "range=%.6g\n",
                    r.trial, r.dimension, r.gap.num_distinct_levels,
                    r.gap.passed ? "pass" : "FAIL", r.gap.min_gap_separation,
                    r.gap.num_collisions, r.spectral_range);
        all = all && r.gap.passed;
    }
    return all ? kExitOk : kExitUnsatisfied;
}

int cmd_selftest(bool quiet) {
    const auto results = run_selftest();
    int failures = 0;
    for (const auto& r : results) {
        if (!r.passed) ++failures;
        if (!quiet || !r.passed)
            std::printf("%-36s %s  %s\n", r.name.c_str(), r.passed ? "ok" : "FAIL",
                        r.detail.c_str());
    }
    std::printf("selftest: %zu checks, %d failures\n", results.size(), failures);
    return failures == 0 ? kExitOk : kExitUnsatisfied;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"exact-diagonalization equilibration simulator and bound certifier"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    add_common(run, run_flags);

    CommonFlags sweep_flags;
    std::string axis_spec;
    auto* sweep = app.add_subcommand("sweep", "run one experiment per axis value");
    add_common(sweep, sweep_flags);
    sweep->add_option("--axis", axis_spec, "bath_dim=<list> or lambda=<list>")->required();

    CommonFlags gap_flags;
    auto* gaps = app.add_subcommand("check-gaps", "spectral analysis and gap check only");
    add_common(gaps, gap_flags);

    bool selftest_quiet = false;
    auto* selftest = app.add_subcommand("selftest", "run the structural invariant suite");
    selftest->add_flag("--quiet", selftest_quiet, "print failures only");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_flags);
        if (sweep->parsed()) return cmd_sweep(sweep_flags, axis_spec);
        if (gaps->parsed()) return cmd_check_gaps(gap_flags);
        if (selftest->parsed()) return cmd_selftest(selftest_quiet);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntime;
    }
}

}  // namespace eqsim
