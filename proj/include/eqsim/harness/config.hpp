#ifndef EQSIM_HARNESS_CONFIG_HPP
#define EQSIM_HARNESS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqsim {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class HamiltonianKind { gue_global, composed };
enum class PartsKind { gue, gue_bath_only };
enum class StateKind { haar_global, product, eigenstate };
enum class GridKind { random, equispaced };

// One factor of a product initial state: Haar-random or a basis vector.
struct FactorStateSpec {
    bool haar = true;
    int basis_index = 0;
};

// Flat key-value configuration; see README for the exact file grammar.
struct ExperimentConfig {
    int d_S = 2;
    int d_B = 10;

    HamiltonianKind hamiltonian_kind = HamiltonianKind::gue_global;
    double lambda = 1.0;          // interaction strength, composed kind only
    PartsKind parts_kind = PartsKind::gue;

    StateKind initial_state_kind = StateKind::haar_global;
    int eigenstate_index = 0;
    FactorStateSpec sys_state;
    FactorStateSpec bath_state;

    std::uint64_t seed = 1;

    GridKind grid_kind = GridKind::random;
    double horizon = 0.0;         // 0 = auto: 50 / min_gap_separation
    int grid_n = 1000;

    int num_trials = 1;
    bool redraw_on_gap_failure = false;

    bool check_distance = true;
    bool check_speed = true;
    bool check_fraction = true;
    bool check_variance = true;
    std::vector<double> fraction_k = {2.0, 5.0, 10.0};
    int variance_observables = 3;

    std::string output_dir = "eqsim_out";
    int max_dimension = 2048;

    int total_dimension() const { return d_S * d_B; }
    void validate() const;  // throws config_error
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo of every resolved key, parseable by parse_config_text.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace eqsim

#endif
