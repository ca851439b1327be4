#ifndef EQSIM_BOUNDS_HPP
#define EQSIM_BOUNDS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eqsim/equilibrium.hpp"

namespace eqsim {

// Outcome of checking one analytic bound against an empirical average.
// satisfied iff lhs_empirical <= rhs_bound + 3 * lhs_stderr (plus a 1e-12
// absolute floor so zero-bound cases are not failed on rounding noise).
struct BoundVerdict {
    std::string name;
    double lhs_empirical = 0.0;
    double lhs_stderr = 0.0;
    double rhs_bound = 0.0;
    bool satisfied = false;
    double slack_ratio = 0.0;  // rhs / lhs, +inf when lhs == 0
    std::string warning;       // nonempty e.g. for equispaced grids (aliasing risk)
};

BoundVerdict make_verdict(std::string name, double lhs, double lhs_stderr, double rhs,
                          std::string warning = {});

// Average subsystem-to-equilibrium distance bounds: {bath-based, omega-based}
// = { sqrt(d_S / d_eff(omega_B)) / 2, sqrt(d_S^2 / d_eff(omega)) / 2 }.
std::pair<double, double> distance_bound_rhs(const BipartiteDims& dims, const EquilibriumData& eq);

// Average-speed bound: coupling_norm * sqrt(d_S^3 / d_eff(omega)).
double speed_bound_rhs(const BipartiteDims& dims, double coupling_norm, double d_eff_omega);

// Speed divided by the coupling norm; undefined for zero coupling.
double natural_units_speed(double avg_speed, double coupling_norm);

// Observable time-variance bound: operator_norm(a)^2 / d_eff(omega).
double reimann_bound_rhs(const HermitianOperator& a, double d_eff_omega);

BoundVerdict certify_distance(const Trajectory& traj, const EquilibriumData& eq,
                              const BipartiteDims& dims);

BoundVerdict certify_speed(const Trajectory& traj, const EquilibriumData& eq,
                           double coupling_norm, const BipartiteDims& dims);

// For each K: fraction of sampled times with speed > K * rhs_bound vs 1/K.
std::vector<BoundVerdict> certify_fraction(const Trajectory& traj, double rhs_bound,
                                           const std::vector<double>& k_values);

BoundVerdict certify_variance(const EvolutionContext& ctx, const HermitianOperator& a,
                              const EquilibriumData& eq, double horizon, int num_samples,
                              std::uint64_t seed);

// Variance certification against an explicit bound value, evaluated at the
// given (trajectory) times.
BoundVerdict certify_variance_at_times(const EvolutionContext& ctx, const HermitianOperator& a,
                                       const EquilibriumData& eq, std::span<const double> times,
                                       double rhs_override = -1.0);

// Heuristic detection of equispaced time grids, used for aliasing warnings.
bool looks_equispaced(std::span<const double> times);

}  // namespace eqsim

#endif
