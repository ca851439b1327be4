#include "eqsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eqsim {

namespace {

// c_j exp(-i E_j t) for a coefficient vector in the energy basis
cvec rotate_phases(const cvec& coeffs, const std::vector<double>& energies, double t) {
    cvec out(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        out[j] = coeffs[j] * std::polar(1.0, -energies[j] * t);
    return out;
}

// tr_B of v w^dag accumulated into a d_S x d_S matrix
void add_pure_block_trace(CMat& target, const cvec& v, const cvec& w, cplx coeff,
                          const BipartiteDims& dims) {
    for (int i = 0; i < dims.d_S; ++i)
        for (int j = 0; j < dims.d_S; ++j) {
            cplx s = 0;
            for (int b = 0; b < dims.d_B; ++b)
                s += v[i * dims.d_B + b] * std::conj(w[j * dims.d_B + b]);
            target(i, j) += coeff * s;
        }
}

}  // namespace

EvolutionContext::EvolutionContext(HamiltonianDecomposition ham, SpectralData spec, PureState psi0)
    : ham_(std::move(ham)),
      spec_(std::move(spec)),
      psi0_(std::move(psi0)),
      h_norm_(spec_.operator_norm()),
      coupling_op_(kron(ham_.h_S().mat(), CMat::identity(ham_.dims().d_B)) + ham_.h_int().mat()) {
    const int D = ham_.dims().D;
    if (psi0_.dim() != D || spec_.eigenvectors().dim() != D)
        throw std::invalid_argument("EvolutionContext: dimension mismatch");

    const CMat& v = spec_.eigenvectors();
    energy_coeffs_.resize(D);
    for (int j = 0; j < D; ++j) {
        cplx s = 0;
        for (int i = 0; i < D; ++i) s += std::conj(v(i, j)) * psi0_.amplitudes()[i];
        energy_coeffs_[j] = s;
    }

    const double n = vnorm(energy_coeffs_);
    if (std::abs(n - 1.0) > tol::norm)
        throw std::invalid_argument("EvolutionContext: energy coefficients are not normalized");
    cvec rec = matvec(v, energy_coeffs_);
    for (int i = 0; i < D; ++i) rec[i] -= psi0_.amplitudes()[i];
    if (vnorm(rec) > tol::norm)
        throw std::invalid_argument(
            "EvolutionContext: eigenbasis does not reproduce the initial state");
}

cvec EvolutionContext::coeffs_at(double t) const {
    return rotate_phases(energy_coeffs_, spec_.eigenvalues(), t);
}

PureState evolve(const EvolutionContext& ctx, double t) {
    return PureState(matvec(ctx.spec().eigenvectors(), ctx.coeffs_at(t)));
}

DensityMatrix subsystem_state(const EvolutionContext& ctx, double t) {
    const PureState psi = evolve(ctx, t);
    return DensityMatrix(pure_partial_trace_bath(psi.amplitudes(), ctx.dims()));
}

HermitianOperator subsystem_derivative(const EvolutionContext& ctx, double t) {
    const auto& dims = ctx.dims();
    const auto& energies = ctx.spec().eigenvalues();
    const CMat& v = ctx.spec().eigenvectors();

    const cvec u = ctx.coeffs_at(t);
    cvec hu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) hu[j] = energies[j] * u[j];

    const cvec psi = matvec(v, u);
    const cvec hpsi = matvec(v, hu);

    // tr_B(i [rho, H]) with rho = |psi><psi|: i (psi (H psi)^dag - (H psi) psi^dag)
    CMat d(dims.d_S);
    add_pure_block_trace(d, psi, hpsi, cplx{0.0, 1.0}, dims);
    add_pure_block_trace(d, hpsi, psi, cplx{0.0, -1.0}, dims);

    const double tr_residue = std::abs(trace(d));
    if (tr_residue > tol::norm * std::max(1.0, ctx.h_norm()))
        throw std::runtime_error("subsystem_derivative: trace residue " +
                                 std::to_string(tr_residue));
    // exact Hermitizing average of O(eps)-asymmetric entries
    for (int i = 0; i < dims.d_S; ++i) {
        d(i, i) = d(i, i).real();
        for (int j = i + 1; j < dims.d_S; ++j) {
            const cplx m = 0.5 * (d(i, j) + std::conj(d(j, i)));
            d(i, j) = m;
            d(j, i) = std::conj(m);
        }
    }
    return HermitianOperator(std::move(d));
}

std::vector<double> basis_coefficients(const EvolutionContext& ctx, double t,
                                       const OperatorBasis& basis) {
    if (basis.d() != ctx.dims().d_S)
        throw std::invalid_argument("basis_coefficients: basis dimension mismatch");
    const CMat d = subsystem_derivative(ctx, t).mat();
    std::vector<double> coeffs(basis.size());
    for (int k = 0; k < basis.size(); ++k) {
        const cplx c = trace(mul(d, basis.element(k).mat()));
        if (std::abs(c.imag()) > tol::orth)
            throw std::runtime_error("basis_coefficients: coefficient " + std::to_string(k) +
                                     " has imaginary part " + std::to_string(c.imag()));
        coeffs[k] = c.real();
    }
    return coeffs;
}

std::vector<double> basis_coefficients_global(const EvolutionContext& ctx, double t,
                                              const OperatorBasis& basis) {
    if (basis.d() != ctx.dims().d_S)
        throw std::invalid_argument("basis_coefficients_global: basis dimension mismatch");
    const auto& dims = ctx.dims();
    const cvec psi = evolve(ctx, t).amplitudes();
    const cvec hc_psi = matvec(ctx.coupling_op(), psi);

    // c_k = tr(rho i[H_S + H_int, e_k (x) I]) = -2 Im <H_c psi | (e_k (x) I) psi>
    std::vector<double> coeffs(basis.size());
    cvec ek_psi(dims.D);
    for (int k = 0; k < basis.size(); ++k) {
        const CMat& ek = basis.element(k).mat();
        for (int i = 0; i < dims.d_S; ++i)
            for (int b = 0; b < dims.d_B; ++b) {
                cplx s = 0;
                for (int j = 0; j < dims.d_S; ++j) s += ek(i, j) * psi[j * dims.d_B + b];
                ek_psi[i * dims.d_B + b] = s;
            }
        coeffs[k] = -2.0 * vdot(hc_psi, ek_psi).imag();
    }
    return coeffs;
}

double subsystem_speed(const EvolutionContext& ctx, double t) {
    return 0.5 * trace_norm(subsystem_derivative(ctx, t));
}

HermitianOperator nth_derivative(const EvolutionContext& ctx, double t, int n) {
    if (n < 1) throw std::invalid_argument("nth_derivative: n must be >= 1");
    const auto& dims = ctx.dims();
    const auto& energies = ctx.spec().eigenvalues();
    const CMat& v = ctx.spec().eigenvectors();
    const cvec u = ctx.coeffs_at(t);
    const int D = dims.D;

    // In the energy basis the nested commutator is entrywise:
    //   (-i (E_j - E_k))^n u_j conj(u_k),
    // expanded binomially into n+1 rank-one terms.
    const cplx minus_i_pow = [n] {
        switch (n & 3) {
            case 0: return cplx{1.0, 0.0};
            case 1: return cplx{0.0, -1.0};
            case 2: return cplx{-1.0, 0.0};
            default: return cplx{0.0, 1.0};
        }
    }();
    CMat d(dims.d_S);
    double binom = 1.0;
    for (int m = 0; m <= n; ++m) {
        cvec x(D), y(D);
        for (int j = 0; j < D; ++j) {
            x[j] = std::pow(energies[j], m) * u[j];
            y[j] = std::pow(-energies[j], n - m) * u[j];
        }
        add_pure_block_trace(d, matvec(v, x), matvec(v, y), minus_i_pow * binom, dims);
        binom = binom * (n - m) / (m + 1);
    }

    const double scale = std::max(1.0, std::pow(2.0 * ctx.h_norm(), n));
    if (std::abs(trace(d)) > tol::norm * scale)
        throw std::runtime_error("nth_derivative: nonzero trace residue");
    if (herm_deviation(d) > 1e-12 * scale)
        throw std::runtime_error("nth_derivative: Hermiticity loss beyond rounding");
    for (int i = 0; i < dims.d_S; ++i) {
        d(i, i) = d(i, i).real();
        for (int j = i + 1; j < dims.d_S; ++j) {
            const cplx m = 0.5 * (d(i, j) + std::conj(d(j, i)));
            d(i, j) = m;
            d(j, i) = std::conj(m);
        }
    }
    return HermitianOperator(std::move(d));
}

double fd_delta(const EvolutionContext& ctx) {
    return ctx.h_norm() > 0 ? 1e-5 / ctx.h_norm() : 1e-5;
}

Trajectory sample_trajectory(const EvolutionContext& ctx, const std::vector<double>& grid,
                             const DensityMatrix& omega_S) {
    if (omega_S.dim() != ctx.dims().d_S)
        throw std::invalid_argument("sample_trajectory: omega_S dimension mismatch");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1])
            throw std::invalid_argument("sample_trajectory: time grid must be ascending");

    const double delta = fd_delta(ctx);
    Trajectory traj;
    traj.times = grid;
    traj.rho_S_snapshots.reserve(grid.size());
    traj.speeds_analytic.reserve(grid.size());
    traj.speeds_fd.reserve(grid.size());
    traj.distances_to_equilibrium.reserve(grid.size());

    for (const double t : grid) {
        DensityMatrix snap = subsystem_state(ctx, t);
        traj.speeds_analytic.push_back(subsystem_speed(ctx, t));

        const cvec plus = evolve(ctx, t + delta).amplitudes();
        const cvec minus = evolve(ctx, t - delta).amplitudes();
        CMat diff = pure_partial_trace_bath(plus, ctx.dims());
        diff -= pure_partial_trace_bath(minus, ctx.dims());
        double sum_abs = 0;
        for (double e : eigvalsh(diff)) sum_abs += std::abs(e);
        traj.speeds_fd.push_back(0.5 * sum_abs / (2.0 * delta));

        traj.distances_to_equilibrium.push_back(trace_distance(snap, omega_S));
        traj.rho_S_snapshots.push_back(std::move(snap));
    }
    return traj;
}

}  // namespace eqsim
