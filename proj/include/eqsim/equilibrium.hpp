#ifndef EQSIM_EQUILIBRIUM_HPP
#define EQSIM_EQUILIBRIUM_HPP

#include <cstdint>
#include <span>

#include "eqsim/dynamics.hpp"

namespace eqsim {

struct EquilibriumData {
    DensityMatrix omega;    // time-averaged global state
    DensityMatrix omega_S;  // tr_B omega
    DensityMatrix omega_B;  // tr_S omega
    double d_eff_omega;
    double d_eff_omega_B;
};

// Infinite-time average: the initial state pinched onto the energy-cluster
// block diagonal, omega = sum_c P_c rho(0) P_c.
EquilibriumData dephased_average(const EvolutionContext& ctx);

// 1 / tr(rho^2)
double effective_dimension(const DensityMatrix& rho);

// Mean of rho(t) over times drawn uniformly at random in [0, horizon].
DensityMatrix empirical_time_average(const EvolutionContext& ctx, double horizon, int num_samples,
                                     std::uint64_t seed);

// <psi(t)| a |psi(t)>
double observable_expectation(const EvolutionContext& ctx, const HermitianOperator& a, double t);

struct VarianceEstimate {
    double mean = 0.0;    // empirical time-variance around the exact tr(omega a)
    double stderr_ = 0.0; // Monte Carlo standard error of the mean
    int n = 0;
};

// Variance of tr(rho(t) a) at the given times; the infinite-time mean is
// taken exactly as tr(omega a).
VarianceEstimate observable_variance_at_times(const EvolutionContext& ctx,
                                              const HermitianOperator& a,
                                              std::span<const double> times,
                                              const DensityMatrix& omega);

double observable_variance_empirical(const EvolutionContext& ctx, const HermitianOperator& a,
                                     double horizon, int num_samples, std::uint64_t seed);

}  // namespace eqsim

#endif
