#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqsim/bounds.hpp"
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
    return EvolutionContext(std::move(h), std::move(spec), PureState(std::move(col)));
}

EquilibriumData fake_equilibrium(double d_eff_omega, double d_eff_omega_b) {
    const DensityMatrix half(0.5 * CMat::identity(2));
    return EquilibriumData{half, half, half, d_eff_omega, d_eff_omega_b};
}

std::vector<double> random_grid(double horizon, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> grid(n);
    for (auto& t : grid) t = rng.uniform(0.0, horizon);
    std::sort(grid.begin(), grid.end());
    return grid;
}

struct PipelineRun {
    EvolutionContext ctx;
    EquilibriumData eq;
    Trajectory traj;
    double coupling = 0.0;
};

PipelineRun run_pipeline(const BipartiteDims& dims, std::uint64_t seed, int n_samples) {
    EvolutionContext ctx = random_context(dims, seed);
    EquilibriumData eq = dephased_average(ctx);
    const auto gap = check_nondegenerate_gaps(ctx.spec());
    const double horizon = 50.0 / gap.min_gap_separation;
    Trajectory traj =
        sample_trajectory(ctx, random_grid(horizon, n_samples, derive_seed(seed, 2)), eq.omega_S);
    const double coupling = coupling_norm(ctx.ham());
    return PipelineRun{std::move(ctx), std::move(eq), std::move(traj), coupling};
}

}  // namespace

TEST_CASE("make_verdict implements the 3-sigma rule and slack ratio") {
    const auto exact = make_verdict("x", 1.0, 0.0, 1.0);
    CHECK(exact.satisfied);
    CHECK(exact.slack_ratio == doctest::Approx(1.0));

    const auto above = make_verdict("x", 1.1, 0.02, 1.0);
    CHECK_FALSE(above.satisfied);

    const auto within_noise = make_verdict("x", 1.05, 0.02, 1.0);
    CHECK(within_noise.satisfied);

    const auto zero_lhs = make_verdict("x", 0.0, 0.0, 0.5);
    CHECK(zero_lhs.satisfied);
    CHECK(std::isinf(zero_lhs.slack_ratio));
}

TEST_CASE("distance_bound_rhs arithmetic") {
    const BipartiteDims dims(2, 2);
    const auto [tight_a, loose_a] = distance_bound_rhs(dims, fake_equilibrium(1.0, 200.0));
    CHECK(tight_a == doctest::Approx(0.05).epsilon(1e-15));

    const auto [tight_b, loose_b] = distance_bound_rhs(dims, fake_equilibrium(800.0, 1.0));
    CHECK(loose_b == doctest::Approx(0.5 * std::sqrt(4.0 / 800.0)).epsilon(1e-15));
    CHECK(loose_b == doctest::Approx(0.03535533905932738).epsilon(1e-14));

    // pure omega: the bound is vacuous (>= max trace distance)
    const auto [tight_c, loose_c] = distance_bound_rhs(dims, fake_equilibrium(1.0, 1.0));
    CHECK(loose_c == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("speed_bound_rhs arithmetic and linearity") {
    const BipartiteDims dims(2, 2);
    CHECK(speed_bound_rhs(dims, 1.0, 800.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(speed_bound_rhs(dims, 0.0, 100.0) == 0.0);

    const double base = speed_bound_rhs(dims, 0.7321, 137.0);
    CHECK(speed_bound_rhs(dims, 2.0 * 0.7321, 137.0) == 2.0 * base);
}

TEST_CASE("natural_units_speed: ratio, scale invariance, zero-coupling error") {
    CHECK(natural_units_speed(0.05, 0.5) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(natural_units_speed(0.05, 0.5) <= std::sqrt(8.0 / 800.0) + 1e-15);
    CHECK(natural_units_speed(2.0 * 0.05, 2.0 * 0.5) == natural_units_speed(0.05, 0.5));
    CHECK_THROWS_AS(natural_units_speed(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("reimann_bound_rhs: unit-norm observables and the commutator composite") {
    CHECK(reimann_bound_rhs(random_gue(8, 70), 100.0) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(reimann_bound_rhs(HermitianOperator::zero(8), 50.0) == 0.0);

    const BipartiteDims dims(2, 4);
    const auto h = decompose(random_gue(8, 71), dims);
    const double coupling = coupling_norm(h);
    const double d_eff = 37.0;
    const auto basis = hermitian_basis(2);
    for (int k = 0; k < basis.size(); ++k) {
        const CMat coupling_op = kron(h.h_S().mat(), CMat::identity(4)) + h.h_int().mat();
        const CMat comm = cplx{0.0, 1.0} *
                          commutator(coupling_op, kron(basis.element(k).mat(), CMat::identity(4)));
        CHECK(reimann_bound_rhs(HermitianOperator(comm), d_eff) <=
              4.0 * coupling * coupling / d_eff + 1e-12);
    }
}

TEST_CASE("certify_distance: stationary, generic, and vacuous-bound cases") {
    const BipartiteDims dims(2, 4);
    const auto stationary = eigenstate_context(dims, 72, 1);
    const auto eq_st = dephased_average(stationary);
    const auto traj_st =
        sample_trajectory(stationary, random_grid(10.0, 50, 73), eq_st.omega_S);
    const auto verdict_st = certify_distance(traj_st, eq_st, dims);
    CHECK(verdict_st.lhs_empirical < 1e-10);
    CHECK(verdict_st.satisfied);
    CHECK(verdict_st.slack_ratio > 1e6);  // lhs is rounding noise, ratio essentially infinite

    const auto run = run_pipeline(BipartiteDims(2, 20), 74, 400);
    const auto verdict = certify_distance(run.traj, run.eq, run.ctx.dims());
    CHECK(verdict.satisfied);
    CHECK(verdict.slack_ratio > 1.0);
    CHECK(verdict.warning.empty());

    // adversarial small bath, eigenstate: d_eff = 1 makes the bound vacuous
    const BipartiteDims small(2, 2);
    const auto tiny = eigenstate_context(small, 75, 0);
    const auto eq_tiny = dephased_average(tiny);
    CHECK(distance_bound_rhs(small, eq_tiny).second >= 1.0 - 1e-9);
    const auto traj_tiny = sample_trajectory(tiny, random_grid(5.0, 20, 76), eq_tiny.omega_S);
    CHECK(certify_distance(traj_tiny, eq_tiny, small).satisfied);
}

TEST_CASE("certify_speed: stationary, generic, and frozen-subsystem cases") {
    const BipartiteDims dims(2, 4);
    const auto stationary = eigenstate_context(dims, 77, 2);
    const auto eq_st = dephased_average(stationary);
    const auto traj_st = sample_trajectory(stationary, random_grid(10.0, 50, 78), eq_st.omega_S);
    const auto verdict_st =
        certify_speed(traj_st, eq_st, coupling_norm(stationary.ham()), dims);
    CHECK(verdict_st.lhs_empirical < 1e-10);
    CHECK(verdict_st.satisfied);

    const auto run = run_pipeline(BipartiteDims(2, 20), 79, 400);
    const auto verdict = certify_speed(run.traj, run.eq, run.coupling, run.ctx.dims());
    CHECK(verdict.satisfied);

    // lambda = 0 and h_S = 0: nothing acts on the subsystem, 0 <= 0
    const BipartiteDims dims23(2, 3);
    const auto frozen_h = compose(HermitianOperator::zero(2), random_gue(3, 80),
                                  HermitianOperator::zero(6), 0.0, dims23);
    auto frozen_spec = spectral_decomposition(frozen_h);
    const EvolutionContext frozen(frozen_h, std::move(frozen_spec),
                                  PureState(haar_vector(6, 81)));
    const auto eq_frozen = dephased_average(frozen);
    const auto traj_frozen = sample_trajectory(frozen, random_grid(5.0, 30, 82), eq_frozen.omega_S);
    const auto verdict_frozen =
        certify_speed(traj_frozen, eq_frozen, coupling_norm(frozen.ham()), dims23);
    CHECK(verdict_frozen.lhs_empirical < 1e-10);
    CHECK(verdict_frozen.rhs_bound < 1e-10);
    CHECK(verdict_frozen.satisfied);
}

TEST_CASE("certify_fraction: Markov-style exceedance fractions") {
    const auto run = run_pipeline(BipartiteDims(2, 16), 83, 500);
    const double rhs = speed_bound_rhs(run.ctx.dims(), run.coupling, run.eq.d_eff_omega);

    const double max_speed =
        *std::max_element(run.traj.speeds_analytic.begin(), run.traj.speeds_analytic.end());
    const auto no_exceed = certify_fraction(run.traj, max_speed, {1.0001});
    CHECK(no_exceed[0].lhs_empirical == 0.0);
    CHECK(no_exceed[0].satisfied);

    const auto verdicts = certify_fraction(run.traj, rhs, {2.0, 5.0, 10.0});
    REQUIRE(verdicts.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(verdicts[i].lhs_empirical <= verdicts[i].rhs_bound);
        CHECK(verdicts[i].satisfied);
    }

    const auto stationary = eigenstate_context(BipartiteDims(2, 4), 84, 0);
    const auto eq_st = dephased_average(stationary);
    const auto traj_st = sample_trajectory(stationary, random_grid(4.0, 25, 85), eq_st.omega_S);
    for (const auto& v : certify_fraction(traj_st, 0.1, {2.0, 5.0}))
        CHECK(v.lhs_empirical == 0.0);

    CHECK_THROWS_AS(certify_fraction(run.traj, rhs, {0.5}), std::invalid_argument);
}

TEST_CASE("certify_variance: identity observable, generic observables, commutator family") {
    const BipartiteDims dims(2, 16);
    const auto ctx = random_context(dims, 86);
    const auto eq = dephased_average(ctx);
    const auto gap = check_nondegenerate_gaps(ctx.spec());
    const double horizon = 50.0 / gap.min_gap_separation;

    const auto id_verdict =
        certify_variance(ctx, HermitianOperator::identity(dims.D), eq, horizon, 200, 87);
    CHECK(id_verdict.lhs_empirical < 1e-20);
    CHECK(id_verdict.satisfied);

    const auto verdict = certify_variance(ctx, random_gue(dims.D, 88), eq, horizon, 500, 89);
    CHECK(verdict.satisfied);

    // a = i[H_S + H_int, e_k (x) I]: certified against the 4 ||H_c||^2 / d_eff constant,
    // and the k-sum respects the d_S^2-scaled aggregate
    const double coupling = coupling_norm(ctx.ham());
    const auto basis = hermitian_basis(2);
    double lhs_sum = 0;
    for (int k = 0; k < basis.size(); ++k) {
        const CMat comm = cplx{0.0, 1.0} *
                          commutator(ctx.coupling_op(), kron(basis.element(k).mat(),
                                                             CMat::identity(dims.d_B)));
        const double rhs_eq10 = 4.0 * coupling * coupling / eq.d_eff_omega;
        const auto vk = certify_variance_at_times(
            ctx, HermitianOperator(comm), eq, random_grid(horizon, 500, derive_seed(86, 90 + k)),
            rhs_eq10);
        CHECK(vk.satisfied);
        lhs_sum += vk.lhs_empirical;
    }
    CHECK(lhs_sum <= 4.0 * coupling * coupling * dims.d_S * dims.d_S / eq.d_eff_omega + 0.01);
}

TEST_CASE("equispaced grids are flagged with an aliasing warning") {
    const BipartiteDims dims(2, 8);
    const auto ctx = random_context(dims, 91);
    const auto eq = dephased_average(ctx);
    std::vector<double> equi;
    for (int i = 0; i < 40; ++i) equi.push_back(0.25 * i);
    const auto traj = sample_trajectory(ctx, equi, eq.omega_S);
    CHECK_FALSE(certify_distance(traj, eq, dims).warning.empty());
    CHECK_FALSE(certify_speed(traj, eq, coupling_norm(ctx.ham()), dims).warning.empty());

    const auto traj_rand = sample_trajectory(ctx, random_grid(10.0, 40, 92), eq.omega_S);
    CHECK(certify_distance(traj_rand, eq, dims).warning.empty());
}

TEST_CASE("property: the bath-based distance bound is tighter when the premise holds") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const BipartiteDims dims(2, 12);
        const auto ctx = random_context(dims, 900 + seed);
        const auto eq = dephased_average(ctx);
        if (eq.d_eff_omega <= dims.d_S * eq.d_eff_omega_B) {
            const auto [tighter, looser] = distance_bound_rhs(dims, eq);
            CHECK(tighter <= looser + 1e-12);
        }
    }
}
