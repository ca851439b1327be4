#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqsim/dynamics.hpp"
#include "eqsim/rng.hpp"
#include "oracles.hpp"

using namespace eqsim;

namespace {

EvolutionContext random_context(const BipartiteDims& dims, std::uint64_t seed) {
    auto h = decompose(random_gue(dims.D, seed), dims);
    auto spec = spectral_decomposition(h);
    PureState psi0(haar_vector(dims.D, derive_seed(seed, 1)));
    return EvolutionContext(std::move(h), std::move(spec), std::move(psi0));
}

EvolutionContext eigenstate_context(const BipartiteDims& dims, std::uint64_t seed, int index) {
    auto h = decompose(random_gue(dims.D, seed), dims);
    auto spec = spectral_decomposition(h);
    cvec col(dims.D);
    for (int i = 0; i < dims.D; ++i) col[i] = spec.eigenvectors()(i, index);
    PureState psi0(std::move(col));
    return EvolutionContext(std::move(h), std::move(spec), std::move(psi0));
}

}  // namespace

TEST_CASE("evolve: t = 0 returns the initial state") {
    const auto ctx = random_context(BipartiteDims(2, 5), 7);
    const auto psi = evolve(ctx, 0.0);
    double dev = 0;
    for (int i = 0; i < 10; ++i)
        dev = std::max(dev, std::abs(psi.amplitudes()[i] - ctx.psi0().amplitudes()[i]));
    CHECK(dev < 1e-12);
}

TEST_CASE("evolve: eigenstates only acquire a phase") {
    const auto ctx = eigenstate_context(BipartiteDims(2, 4), 8, 3);
    const auto rho0 = DensityMatrix::from_pure(ctx.psi0());
    for (double t : {0.3, 2.7, 150.0}) {
        const auto rho_t = DensityMatrix::from_pure(evolve(ctx, t));
        CHECK(max_abs(rho_t.mat() - rho0.mat()) < 1e-11);
    }
}

TEST_CASE("evolve matches Runge-Kutta integration of the Schrodinger equation") {
    const auto ctx = random_context(BipartiteDims(2, 6), 9);
    const double t = 0.37;
    const cvec expected = oracle::rk4_evolve(ctx.ham().total().mat(), ctx.psi0().amplitudes(), t, 1e-4);
    const cvec got = evolve(ctx, t).amplitudes();
    double dev = 0;
    for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - expected[i]));
    CHECK(dev < 1e-10);
}

TEST_CASE("subsystem_state: stationary for eigenstates, matches tr_B at t = 0") {
    const BipartiteDims dims(2, 4);
    const auto ctx = eigenstate_context(dims, 10, 1);
    const auto rs0 = subsystem_state(ctx, 0.0);
    CHECK(max_abs(rs0.mat() -
                  partial_trace_bath(DensityMatrix::from_pure(ctx.psi0()), dims).mat()) < 1e-12);
    CHECK(max_abs(subsystem_state(ctx, 11.3).mat() - rs0.mat()) < 1e-11);

    const auto random_ctx = random_context(dims, 11);
    const cvec psi_t = oracle::rk4_evolve(random_ctx.ham().total().mat(),
                                          random_ctx.psi0().amplitudes(), 0.37, 1e-4);
    const CMat expected = oracle::index_sum_trace_bath(outer(psi_t, psi_t), 2, 4);
    CHECK(max_abs(subsystem_state(random_ctx, 0.37).mat() - expected) < 1e-10);
}

TEST_CASE("subsystem_derivative: zero for stationary states") {
    const auto ctx = eigenstate_context(BipartiteDims(2, 4), 12, 5);
    CHECK(max_abs(subsystem_derivative(ctx, 0.0).mat()) < 1e-11);
    CHECK(max_abs(subsystem_derivative(ctx, 3.7).mat()) < 1e-11);
}

TEST_CASE("subsystem_derivative: zero when nothing acts on the subsystem") {
    const BipartiteDims dims(2, 3);
    const auto h = compose(HermitianOperator::zero(2), random_gue(3, 13),
                           HermitianOperator::zero(6), 0.0, dims);
    auto spec = spectral_decomposition(h);
    const EvolutionContext ctx(h, std::move(spec), PureState(haar_vector(6, 14)));
    for (double t : {0.0, 1.0, 9.2}) CHECK(max_abs(subsystem_derivative(ctx, t).mat()) < 1e-11);
}

TEST_CASE("subsystem_derivative matches central finite differences") {
    const auto ctx = random_context(BipartiteDims(2, 5), 15);
    const double delta = 1e-6;
    for (double t : {0.0, 0.9, 4.4}) {
        const CMat plus = subsystem_state(ctx, t + delta).mat();
        const CMat minus = subsystem_state(ctx, t - delta).mat();
        const CMat fd = (1.0 / (2.0 * delta)) * (plus - minus);
        CHECK(max_abs(subsystem_derivative(ctx, t).mat() - fd) < 1e-6 * ctx.h_norm());
    }
}

TEST_CASE("subsystem_derivative equals tr_B(i[rho, H_S (x) I + H_int])") {
    const auto ctx = random_context(BipartiteDims(2, 4), 16);
    const double t = 1.23;
    const cvec psi = evolve(ctx, t).amplitudes();
    const CMat rho = outer(psi, psi);
    const CMat comm = cplx{0.0, 1.0} * commutator(rho, ctx.coupling_op());
    const CMat expected = oracle::index_sum_trace_bath(comm, 2, 4);
    CHECK(max_abs(subsystem_derivative(ctx, t).mat() - expected) < 1e-12);
}

TEST_CASE("basis_coefficients: zero for eigenstates, reconstruction, two routes agree") {
    const auto basis = hermitian_basis(2);

    const auto stationary = eigenstate_context(BipartiteDims(2, 4), 17, 0);
    for (double c : basis_coefficients(stationary, 1.1, basis)) CHECK(std::abs(c) < 1e-11);

    const auto ctx = random_context(BipartiteDims(2, 5), 18);
    const double t = 0.8;
    const auto coeffs = basis_coefficients(ctx, t, basis);
    CMat rec(2);
    for (int k = 0; k < basis.size(); ++k) rec += coeffs[k] * basis.element(k).mat();
    CHECK(max_abs(rec - subsystem_derivative(ctx, t).mat()) < 1e-12);

    const auto global = basis_coefficients_global(ctx, t, basis);
    for (int k = 0; k < basis.size(); ++k)
        CHECK(coeffs[k] == doctest::Approx(global[k]).epsilon(1e-10));
}

TEST_CASE("subsystem_speed: stationary states and a solvable qubit") {
    const auto stationary = eigenstate_context(BipartiteDims(2, 3), 19, 2);
    CHECK(subsystem_speed(stationary, 0.7) < 1e-11);

    // d_B = 1, H = alpha sigma_x, psi0 = |0>: d rho_S/dt(0) = -alpha sigma_y, speed |alpha|
    const BipartiteDims dims(2, 1);
    const double alpha = 0.37;
    const auto h = decompose(HermitianOperator(alpha * oracle::sigma_x()), dims);
    auto spec = spectral_decomposition(h);
    cvec zero_state(2);
    zero_state[0] = 1.0;
    const EvolutionContext qubit(h, std::move(spec), PureState(std::move(zero_state)));
    CHECK(max_abs(subsystem_derivative(qubit, 0.0).mat() - (-alpha) * oracle::sigma_y()) < 1e-12);
    CHECK(subsystem_speed(qubit, 0.0) == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("subsystem_speed matches the difference-quotient definition") {
    const auto ctx = random_context(BipartiteDims(2, 6), 20);
    const double delta = 1e-5;
    for (double t : {0.4, 2.2}) {
        const double v = subsystem_speed(ctx, t);
        const double quotient =
            trace_distance(subsystem_state(ctx, t), subsystem_state(ctx, t + delta)) / delta;
        CHECK(std::abs(quotient - v) / v < 1e-3);
    }
}

TEST_CASE("nth_derivative: n = 1 reduces to subsystem_derivative") {
    const auto ctx = random_context(BipartiteDims(2, 5), 21);
    for (double t : {0.0, 1.7})
        CHECK(max_abs(nth_derivative(ctx, t, 1).mat() - subsystem_derivative(ctx, t).mat()) <
              1e-12);
    CHECK_THROWS_AS(nth_derivative(ctx, 0.0, 0), std::invalid_argument);
}

TEST_CASE("nth_derivative: zero for eigenstates at any order") {
    const auto ctx = eigenstate_context(BipartiteDims(2, 4), 22, 4);
    for (int n : {1, 2, 3}) CHECK(max_abs(nth_derivative(ctx, 0.9, n).mat()) < 1e-10);
}

TEST_CASE("nth_derivative agrees with the dense nested commutator") {
    const auto ctx = random_context(BipartiteDims(3, 4), 23);
    const double t = 0.6;
    const cvec psi = evolve(ctx, t).amplitudes();
    const CMat rho = outer(psi, psi);
    for (int n : {1, 2, 3}) {
        const CMat dense = oracle::index_sum_trace_bath(
            oracle::nested_commutator(rho, ctx.ham().total().mat(), n), 3, 4);
        CHECK(max_abs(nth_derivative(ctx, t, n).mat() - dense) < 1e-10);
    }
}

TEST_CASE("nth_derivative: n = 2 matches the second-order central difference") {
    const auto ctx = random_context(BipartiteDims(2, 5), 24);
    const double t = 1.1;
    const double delta = 1e-4;
    const CMat mid = subsystem_state(ctx, t).mat();
    const CMat plus = subsystem_state(ctx, t + delta).mat();
    const CMat minus = subsystem_state(ctx, t - delta).mat();
    const CMat fd = (1.0 / (delta * delta)) * (plus - 2.0 * mid + minus);
    CHECK(max_abs(nth_derivative(ctx, t, 2).mat() - fd) < 1e-5);
}

TEST_CASE("sample_trajectory: single point, stationary case, grid validation") {
    const BipartiteDims dims(2, 4);
    const auto ctx = random_context(dims, 25);
    const auto omega_s = partial_trace_bath(DensityMatrix::from_pure(ctx.psi0()), dims);

    const auto single = sample_trajectory(ctx, {0.0}, omega_s);
    CHECK(single.times.size() == 1);
    CHECK(max_abs(single.rho_S_snapshots[0].mat() - omega_s.mat()) < 1e-12);

    const auto stationary = eigenstate_context(dims, 26, 3);
    const auto omega_stat = partial_trace_bath(DensityMatrix::from_pure(stationary.psi0()), dims);
    const auto traj = sample_trajectory(stationary, {0.0, 1.0, 5.0}, omega_stat);
    for (double s : traj.speeds_analytic) CHECK(s < 1e-10);
    for (double s : traj.speeds_fd) CHECK(s < 1e-6);
    for (double d : traj.distances_to_equilibrium) CHECK(d < 1e-10);

    CHECK_THROWS_AS(sample_trajectory(ctx, {1.0, 0.5}, omega_s), std::invalid_argument);
}

TEST_CASE("sample_trajectory: analytic and finite-difference speeds agree") {
    const BipartiteDims dims(2, 40);
    const auto ctx = random_context(dims, 27);
    const auto omega_s = partial_trace_bath(DensityMatrix::from_pure(ctx.psi0()), dims);
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(0.37 * i);
    const auto traj = sample_trajectory(ctx, grid, omega_s);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(traj.speeds_analytic[i] >= 0.0);
        CHECK(std::abs(traj.speeds_fd[i] - traj.speeds_analytic[i]) /
                  traj.speeds_analytic[i] <
              1e-3);
    }
}

TEST_CASE("property: evolution preserves the norm") {
    const auto ctx = random_context(BipartiteDims(2, 7), 28);
    Rng rng(29);
    for (int i = 0; i < 20; ++i) {
        const double t = rng.uniform(0.0, 1000.0);
        CHECK(std::abs(vnorm(evolve(ctx, t).amplitudes()) - 1.0) < 1e-12);
    }
}

TEST_CASE("property: commutator norm bounded by twice the coupling norm") {
    const BipartiteDims dims(3, 4);
    const auto h = decompose(random_gue(12, 30), dims);
    const double bound = 2.0 * coupling_norm(h);
    const CMat coupling = kron(h.h_S().mat(), CMat::identity(4)) + h.h_int().mat();
    const auto basis = hermitian_basis(3);
    for (int k = 0; k < basis.size(); ++k) {
        const CMat comm = cplx{0.0, 1.0} *
                          commutator(coupling, kron(basis.element(k).mat(), CMat::identity(4)));
        CHECK(operator_norm(HermitianOperator(comm)) <= bound + 1e-12);
    }
}

TEST_CASE("property: the bath Hamiltonian is invisible to the subsystem derivative") {
    const BipartiteDims dims(2, 4);
    const auto h_b = random_gue(4, 31);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CMat rho = oracle::random_density(8, 3, 600 + seed);
        const CMat comm =
            cplx{0.0, 1.0} * commutator(rho, kron(CMat::identity(2), h_b.mat()));
        const auto reduced = partial_trace_bath(HermitianOperator(comm), dims);
        CHECK(max_abs(reduced.mat()) < 1e-12);
    }
}

TEST_CASE("property: constant Hamiltonian shifts change nothing observable") {
    const BipartiteDims dims(2, 4);
    const auto base = random_gue(8, 32);
    const auto shifted = HermitianOperator(base.mat() + 5.0 * CMat::identity(8));
    const PureState psi0(haar_vector(8, 33));

    auto h1 = decompose(base, dims);
    auto h2 = decompose(shifted, dims);
    const EvolutionContext ctx1(h1, spectral_decomposition(h1), psi0);
    const EvolutionContext ctx2(h2, spectral_decomposition(h2), psi0);

    for (double t : {0.5, 3.3}) {
        const auto r1 = DensityMatrix::from_pure(evolve(ctx1, t));
        const auto r2 = DensityMatrix::from_pure(evolve(ctx2, t));
        CHECK(max_abs(r1.mat() - r2.mat()) < 1e-10);
        CHECK(max_abs(subsystem_derivative(ctx1, t).mat() - subsystem_derivative(ctx2, t).mat()) <
              1e-10);
    }
}

TEST_CASE("property: sum of squared coefficients equals the squared HS norm") {
    const auto ctx = random_context(BipartiteDims(2, 6), 34);
    const auto basis = hermitian_basis(2);
    for (double t : {0.2, 1.9, 7.5}) {
        const auto coeffs = basis_coefficients(ctx, t, basis);
        double sum_sq = 0;
        for (double c : coeffs) sum_sq += c * c;
        const double hs = hs_norm(subsystem_derivative(ctx, t));
        CHECK(sum_sq == doctest::Approx(hs * hs).epsilon(1e-10));
    }
}

TEST_CASE("property: both rank bounds hold for the subsystem derivative") {
    // trace_norm^2 <= rank * hs_norm^2, and the dimension-capped variant
    // trace_norm^2 <= d_S * hs_norm^2 that the speed bound rests on
    const BipartiteDims dims(3, 5);
    const auto ctx = random_context(dims, 35);
    for (double t : {0.1, 0.9, 3.3}) {
        const auto deriv = subsystem_derivative(ctx, t);
        const double tn = trace_norm(deriv);
        const double hs = hs_norm(deriv);
        CHECK(tn * tn <= rank(deriv) * hs * hs * (1.0 + 1e-12));
        CHECK(rank(deriv) <= dims.d_S);
        CHECK(tn * tn <= dims.d_S * hs * hs * (1.0 + 1e-12));
    }
}
