#include "eqsim/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "eqsim/rng.hpp"

namespace eqsim {

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_and_stderr(const std::vector<double>& xs) {
    MeanStderr r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.stderr_ = std::sqrt(ss / (static_cast<double>(xs.size()) * (xs.size() - 1)));
    }
    return r;
}

GapSummary summarize(const GapReport& report) {
    GapSummary s;
    s.passed = report.passed;
    s.num_distinct_levels = report.num_distinct_levels;
    s.min_gap_separation = report.min_gap_separation;
    s.num_collisions = static_cast<int>(report.colliding_pairs.size());
    return s;
}

HamiltonianDecomposition build_hamiltonian(const ExperimentConfig& config,
                                           const BipartiteDims& dims, std::uint64_t h_seed) {
    if (config.hamiltonian_kind == HamiltonianKind::gue_global)
        return decompose(random_gue(dims.D, h_seed), dims);

    const auto h_b = random_gue(dims.d_B, derive_seed(h_seed, 2));
    const auto h_int = random_gue(dims.D, derive_seed(h_seed, 3));
    if (config.parts_kind == PartsKind::gue_bath_only)
        return compose(HermitianOperator::zero(dims.d_S), h_b, h_int, config.lambda, dims);
    const auto h_s = random_gue(dims.d_S, derive_seed(h_seed, 1));
    return compose(h_s, h_b, h_int, config.lambda, dims);
}

cvec product_factor(const FactorStateSpec& spec, int dim, std::uint64_t seed) {
    if (spec.haar) return haar_vector(dim, seed);
    cvec v(dim);
    v[spec.basis_index] = 1.0;
    return v;
}

PureState build_initial_state(const ExperimentConfig& config, const BipartiteDims& dims,
                              const SpectralData& spec, std::uint64_t state_seed) {
    switch (config.initial_state_kind) {
        case StateKind::haar_global:
            return PureState(haar_vector(dims.D, state_seed));
        case StateKind::eigenstate: {
            cvec col(dims.D);
            for (int i = 0; i < dims.D; ++i)
                col[i] = spec.eigenvectors()(i, config.eigenstate_index);
            return PureState(std::move(col));
        }
        case StateKind::product: {
            const cvec s = product_factor(config.sys_state, dims.d_S, derive_seed(state_seed, 1));
            const cvec b = product_factor(config.bath_state, dims.d_B, derive_seed(state_seed, 2));
            cvec psi(dims.D);
            for (int i = 0; i < dims.d_S; ++i)
                for (int j = 0; j < dims.d_B; ++j) psi[i * dims.d_B + j] = s[i] * b[j];
            return PureState(std::move(psi));
        }
    }
    throw std::logic_error("unreachable state kind");
}

double resolve_horizon(const ExperimentConfig& config, const GapReport& gap,
                       const SpectralData& spec) {
    if (config.horizon > 0) return config.horizon;
    if (std::isfinite(gap.min_gap_separation) && gap.min_gap_separation > 0)
        return 50.0 / gap.min_gap_separation;
    // fewer than two gaps: fall back to the smallest level spacing
    double min_gap = std::numeric_limits<double>::infinity();
    for (int c = 1; c < spec.num_clusters(); ++c)
        min_gap = std::min(min_gap, spec.cluster_energy(c) - spec.cluster_energy(c - 1));
    return std::isfinite(min_gap) && min_gap > 0 ? 50.0 / min_gap : 1.0;
}

std::vector<double> build_grid(const ExperimentConfig& config, double horizon,
                               std::uint64_t grid_seed) {
    std::vector<double> grid(config.grid_n);
    if (config.grid_kind == GridKind::random) {
        Rng rng(grid_seed);
        for (auto& t : grid) t = rng.uniform(0.0, horizon);
        std::sort(grid.begin(), grid.end());
    } else {
        for (int i = 0; i < config.grid_n; ++i)
            grid[i] = horizon * static_cast<double>(i) / (config.grid_n - 1);
    }
    return grid;
}

struct TrialOutput {
    TrialResult result;
    Trajectory trajectory;  // empty when skipped
};

TrialOutput run_trial(const ExperimentConfig& config, int trial_index) {
    const auto start = clock_type::now();
    const BipartiteDims dims(config.d_S, config.d_B);
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(trial_index);

    TrialOutput out;
    TrialResult& res = out.result;
    res.index = trial_index;

    // draw (and optionally redraw) until the gap condition holds
    constexpr int max_attempts = 100;
    HamiltonianDecomposition ham = build_hamiltonian(config, dims, trial_seed);
    auto eig_start = clock_type::now();
    SpectralData spec = spectral_decomposition(ham);
    res.eigensolve_seconds = seconds_since(eig_start);
    GapReport gap = check_nondegenerate_gaps(spec);
    int attempt = 0;
    while (!gap.passed && config.redraw_on_gap_failure && attempt + 1 < max_attempts) {
        ++attempt;
        ham = build_hamiltonian(config, dims,
                                derive_seed(trial_seed, seed_stream::redraw_base + attempt));
        eig_start = clock_type::now();
        spec = spectral_decomposition(ham);
        res.eigensolve_seconds += seconds_since(eig_start);
        gap = check_nondegenerate_gaps(spec);
    }
    res.redraws = attempt;
    res.gap = summarize(gap);

    if (!gap.passed) {
        res.status = "skipped_gap_check";
        res.wall_seconds = seconds_since(start);
        return out;
    }

    const PureState psi0 =
        build_initial_state(config, dims, spec, derive_seed(trial_seed, seed_stream::state));
    const EvolutionContext ctx(std::move(ham), std::move(spec), psi0);
    const EquilibriumData eq = dephased_average(ctx);

    res.horizon = resolve_horizon(config, gap, ctx.spec());
    const std::vector<double> grid =
        build_grid(config, res.horizon, derive_seed(trial_seed, seed_stream::grid));
    Trajectory traj = sample_trajectory(ctx, grid, eq.omega_S);

    const double coupling = coupling_norm(ctx.ham());
    res.status = "ok";
    res.d_eff_omega = eq.d_eff_omega;
    res.d_eff_omega_B = eq.d_eff_omega_B;
    res.coupling_norm = coupling;

    const auto dist_stats = mean_and_stderr(traj.distances_to_equilibrium);
    res.mean_distance = dist_stats.mean;
    res.stderr_distance = dist_stats.stderr_;
    const auto speed_stats = mean_and_stderr(traj.speeds_analytic);
    res.mean_speed = speed_stats.mean;
    res.stderr_speed = speed_stats.stderr_;
    res.natural_units_speed = coupling > 0 ? natural_units_speed(speed_stats.mean, coupling) : 0.0;
    res.max_speed =
        traj.speeds_analytic.empty()
            ? 0.0
            : *std::max_element(traj.speeds_analytic.begin(), traj.speeds_analytic.end());
    res.distance_rhs_bath = distance_bound_rhs(dims, eq).first;

    if (config.check_distance) res.verdicts.push_back(certify_distance(traj, eq, dims));
    if (config.check_speed) res.verdicts.push_back(certify_speed(traj, eq, coupling, dims));
    if (config.check_fraction) {
        const double rhs = speed_bound_rhs(dims, coupling, eq.d_eff_omega);
        for (auto& v : certify_fraction(traj, rhs, config.fraction_k))
            res.verdicts.push_back(std::move(v));
    }
    if (config.check_variance) {
        for (int k = 0; k < config.variance_observables; ++k) {
            const auto a =
                random_gue(dims.D, derive_seed(trial_seed, seed_stream::observable_base + k));
            auto v = certify_variance_at_times(ctx, a, eq, traj.times);
            v.name = "observable_variance_" + std::to_string(k);
            res.verdicts.push_back(std::move(v));
        }
    }

    out.trajectory = std::move(traj);
    res.wall_seconds = seconds_since(start);
    return out;
}

std::string trial_csv_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trial_%03d.csv", index);
    return buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trajectory CSV for writing: " + path);
    out << "t,distance,speed_analytic,speed_fd\n";
    char buf[160];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", traj.times[i],
                      traj.distances_to_equilibrium[i], traj.speeds_analytic[i],
                      traj.speeds_fd[i]);
        out << buf;
    }
    if (!out) throw std::runtime_error("failed while writing trajectory CSV: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trajectory CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,distance,speed_analytic,speed_fd")
        throw std::runtime_error("bad trajectory CSV header in " + path);
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, d, va, vf;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg", &t, &d, &va, &vf) != 4)
            throw std::runtime_error("bad trajectory CSV row in " + path + ": " + line);
        traj.times.push_back(t);
        traj.distances_to_equilibrium.push_back(d);
        traj.speeds_analytic.push_back(va);
        traj.speeds_fd.push_back(vf);
    }
    return traj;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    const auto start = clock_type::now();
    config.validate();

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir))
        throw config_error("config: cannot create output directory '" + config.output_dir + "'");

    std::vector<TrialOutput> outputs(config.num_trials);
    std::atomic<int> next{0};
    std::mutex io_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= config.num_trials) return;
            outputs[i] = run_trial(config, i);
            if (!options.quiet) {
                std::lock_guard<std::mutex> lock(io_mutex);
                const TrialResult& r = outputs[i].result;
                std::printf("trial %d: %s (%.2fs)\n", i, r.status.c_str(), r.wall_seconds);
                std::fflush(stdout);
            }
        }
    };

    const int num_threads = std::max(1, std::min(options.threads, config.num_trials));
    if (num_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(num_threads);
        for (int i = 0; i < num_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ExperimentReport report;
    report.config = config;
    for (auto& out : outputs) {
        if (out.result.ok())
            write_trajectory_csv(out.trajectory, (fs::path(config.output_dir) /
                                                  trial_csv_name(out.result.index))
                                                     .string());
        report.trials.push_back(std::move(out.result));
    }
    report.aggregate = compute_aggregate(report.trials);
    report.total_wall_seconds = seconds_since(start);
    write_report(report, (fs::path(config.output_dir) / "report.txt").string());
    return report;
}

std::vector<ExperimentReport> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                        const std::vector<double>& values,
                                        const RunOptions& options) {
    if (values.empty()) throw config_error("sweep: empty axis");
    if (axis == SweepAxis::lambda && base.hamiltonian_kind != HamiltonianKind::composed)
        throw config_error("sweep: lambda axis requires hamiltonian.kind = composed");

    std::vector<ExperimentReport> reports;
    reports.reserve(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        ExperimentConfig point = base;
        point.seed = base.seed + 1000003ull * p;
        std::ostringstream label;
        if (axis == SweepAxis::bath_dim) {
            const int d_b = static_cast<int>(values[p]);
            if (d_b < 1 || static_cast<double>(d_b) != values[p])
                throw config_error("sweep: bath_dim values must be positive integers");
            point.d_B = d_b;
            label << "bath_dim_" << d_b;
        } else {
            point.lambda = values[p];
            label << "lambda_" << values[p];
        }
        point.output_dir = (fs::path(base.output_dir) / label.str()).string();
        if (!options.quiet) std::printf("[sweep] %s\n", label.str().c_str());
        reports.push_back(run_experiment(point, options));
    }

    std::error_code ec;
    fs::create_directories(base.output_dir, ec);
    std::ofstream summary(fs::path(base.output_dir) / "sweep_summary.txt");
    summary << "axis,value,trials_ok,median_natural_units_speed,median_mean_distance,"
               "all_satisfied\n";
    for (std::size_t p = 0; p < values.size(); ++p) {
        const auto& agg = reports[p].aggregate;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%.17g,%s\n",
                      axis == SweepAxis::bath_dim ? "bath_dim" : "lambda", values[p],
                      agg.trials_ok, agg.natural_units_speed.median, agg.mean_distance.median,
                      agg.all_satisfied ? "true" : "false");
        summary << buf;
    }
    return reports;
}

std::vector<GapCheckResult> run_gap_checks(const ExperimentConfig& config) {
    config.validate();
    const BipartiteDims dims(config.d_S, config.d_B);
    std::vector<GapCheckResult> results;
    results.reserve(config.num_trials);
    for (int i = 0; i < config.num_trials; ++i) {
        const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(i);
        const auto ham = build_hamiltonian(config, dims, trial_seed);
        const auto spec = spectral_decomposition(ham);
        GapCheckResult r;
        r.trial = i;
        r.gap = summarize(check_nondegenerate_gaps(spec));
        r.spectral_range = spec.spectral_range();
        r.dimension = dims.D;
        results.push_back(r);
    }
    return results;
}

}  // namespace eqsim
