#ifndef EQSIM_DYNAMICS_HPP
#define EQSIM_DYNAMICS_HPP

#include <vector>

#include "eqsim/hamiltonian.hpp"
#include "eqsim/qcore.hpp"

namespace eqsim {

// Everything needed to evaluate the evolution at arbitrary t: the spectral
// data of H and the initial state expanded in the energy eigenbasis.
class EvolutionContext {
public:
    EvolutionContext(HamiltonianDecomposition ham, SpectralData spec, PureState psi0);

    const HamiltonianDecomposition& ham() const { return ham_; }
    const SpectralData& spec() const { return spec_; }
    const PureState& psi0() const { return psi0_; }
    const cvec& energy_coeffs() const { return energy_coeffs_; }
    const BipartiteDims& dims() const { return ham_.dims(); }

    double h_norm() const { return h_norm_; }                 // operator norm of H
    const CMat& coupling_op() const { return coupling_op_; }  // h_S (x) I + h_int

    // energy-basis coefficients at time t: c_j exp(-i E_j t)
    cvec coeffs_at(double t) const;

private:
    HamiltonianDecomposition ham_;
    SpectralData spec_;
    PureState psi0_;
    cvec energy_coeffs_;
    double h_norm_;
    CMat coupling_op_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> rho_S_snapshots;
    std::vector<double> speeds_analytic;
    std::vector<double> speeds_fd;
    std::vector<double> distances_to_equilibrium;
};

PureState evolve(const EvolutionContext& ctx, double t);

DensityMatrix subsystem_state(const EvolutionContext& ctx, double t);

// d rho_S / dt = tr_B(i [rho(t), H]), returned as a traceless Hermitian
// operator on the subsystem.
HermitianOperator subsystem_derivative(const EvolutionContext& ctx, double t);

// Expansion c_k(t) = tr_S(d rho_S/dt e_k); coefficients are real.
std::vector<double> basis_coefficients(const EvolutionContext& ctx, double t,
                                       const OperatorBasis& basis);

// Same coefficients via the global trace tr(rho(t) i[h_S (x) I + h_int, e_k (x) I]).
std::vector<double> basis_coefficients_global(const EvolutionContext& ctx, double t,
                                              const OperatorBasis& basis);

double subsystem_speed(const EvolutionContext& ctx, double t);

// tr_B of the n-fold nested commutator i^n [...[rho(t), H]..., H].
HermitianOperator nth_derivative(const EvolutionContext& ctx, double t, int n);

// Central-difference step used for the trajectory's finite-difference speeds.
double fd_delta(const EvolutionContext& ctx);

Trajectory sample_trajectory(const EvolutionContext& ctx, const std::vector<double>& grid,
                             const DensityMatrix& omega_S);

}  // namespace eqsim

#endif
