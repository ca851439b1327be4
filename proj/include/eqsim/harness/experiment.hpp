#ifndef EQSIM_HARNESS_EXPERIMENT_HPP
#define EQSIM_HARNESS_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "eqsim/dynamics.hpp"
#include "eqsim/harness/report.hpp"

namespace eqsim {

struct RunOptions {
    int threads = 1;
    bool quiet = false;
};

// Runs num_trials independent trials (optionally in parallel), writes one
// CSV per completed trial plus report.txt into config.output_dir, and
// returns the full report. Bit-identical numeric results for a fixed
// (config, seed) regardless of thread count.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

enum class SweepAxis { bath_dim, lambda };

// One run_experiment per axis value; point p runs with seed base.seed +
// 1000003 * p (so a singleton sweep equals run_experiment) and writes under
// output_dir/<axis>_<value>/. A sweep_summary.txt lands in output_dir.
std::vector<ExperimentReport> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                        const std::vector<double>& values,
                                        const RunOptions& options = {});

// Header t,distance,speed_analytic,speed_fd; 17 significant digits per value.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Reads the numeric columns back; snapshots are not persisted.
Trajectory read_trajectory_csv(const std::string& path);

// Spectral analysis only: per-trial Hamiltonian and its gap report.
struct GapCheckResult {
    int trial = 0;
    GapSummary gap;
    double spectral_range = 0.0;
    int dimension = 0;
};
std::vector<GapCheckResult> run_gap_checks(const ExperimentConfig& config);

// Per-trial seed streams (documented so external tooling can reproduce draws).
namespace seed_stream {
inline constexpr std::uint64_t state = 1;
inline constexpr std::uint64_t grid = 2;
inline constexpr std::uint64_t observable_base = 10;  // + observable index
inline constexpr std::uint64_t redraw_base = 1000;    // + attempt index
}  // namespace seed_stream

}  // namespace eqsim

#endif
