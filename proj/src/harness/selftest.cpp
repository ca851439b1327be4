#include "eqsim/harness/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "eqsim/bounds.hpp"
#include "eqsim/rng.hpp"

namespace eqsim {

namespace {

struct Checker {
    std::vector<CheckResult> results;

    void run(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
        CheckResult r;
        r.name = name;
        std::ostringstream detail;
        try {
            r.passed = body(detail);
        } catch (const std::exception& e) {
            r.passed = false;
            detail << "exception: " << e.what();
        }
        r.detail = detail.str();
        results.push_back(std::move(r));
    }
};

CMat random_mixed_state(int n, int rank, std::uint64_t seed) {
    CMat m(n);
    Rng rng(seed);
    std::vector<double> w(rank);
    double total = 0;
    for (auto& x : w) {
        x = rng.uniform() + 0.1;
        total += x;
    }
    for (int r = 0; r < rank; ++r) {
        cvec v(n);
        for (auto& c : v) c = rng.complex_normal();
        const double nv = vnorm(v);
        for (auto& c : v) c /= nv;
        add_outer(m, v, v, w[r] / total);
    }
    return m;
}

HermitianOperator diag_op(const std::vector<double>& values) {
    CMat m(static_cast<int>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        m(static_cast<int>(i), static_cast<int>(i)) = values[i];
    return HermitianOperator(std::move(m));
}

EvolutionContext make_random_context(const BipartiteDims& dims, std::uint64_t seed) {
    auto h = decompose(random_gue(dims.D, seed), dims);
    auto spec = spectral_decomposition(h);
    return EvolutionContext(std::move(h), std::move(spec),
                            PureState(haar_vector(dims.D, derive_seed(seed, 1))));
}

}  // namespace

std::vector<CheckResult> run_selftest() {
    Checker checker;

    checker.run("operator_basis_orthonormality", [](std::ostringstream& detail) {
        double worst = 0;
        for (int d : {2, 3, 4}) {
            const auto basis = hermitian_basis(d);
            for (int k = 0; k < basis.size(); ++k)
                for (int l = 0; l < basis.size(); ++l) {
                    const cplx g = trace(mul(basis.element(k).mat(), basis.element(l).mat()));
                    worst = std::max(worst, std::abs(g - (k == l ? 1.0 : 0.0)));
                }
        }
        detail << "worst Gram deviation " << worst;
        return worst < tol::orth;
    });

    checker.run("operator_basis_reconstruction", [](std::ostringstream& detail) {
        double worst = 0;
        for (int d : {2, 3}) {
            const auto basis = hermitian_basis(d);
            Rng rng(301 + d);
            CMat m(d);
            for (int i = 0; i < d; ++i) {
                m(i, i) = rng.normal();
                for (int j = i + 1; j < d; ++j) {
                    const cplx z = rng.complex_normal();
                    m(i, j) = z;
                    m(j, i) = std::conj(z);
                }
            }
            CMat rec(d);
            for (int k = 0; k < basis.size(); ++k)
                rec += trace(mul(m, basis.element(k).mat())).real() * basis.element(k).mat();
            worst = std::max(worst, max_abs(rec - m) / (tol::orth * d * d));
        }
        detail << "worst reconstruction residual (in units of tol*d^2) " << worst;
        return worst < 1.0;
    });

    checker.run("partial_trace_preserves_trace", [](std::ostringstream& detail) {
        const BipartiteDims dims(3, 4);
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityMatrix rho(random_mixed_state(12, 3, 310 + seed));
            const auto reduced = partial_trace_bath(rho, dims);
            worst = std::max(worst,
                             std::abs(trace(reduced.mat()).real() - trace(rho.mat()).real()));
        }
        detail << "worst trace drift " << worst;
        return worst < 1e-12;
    });

    checker.run("trace_distance_metric", [](std::ostringstream& detail) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityMatrix a(random_mixed_state(5, 2, 320 + seed));
            const DensityMatrix b(random_mixed_state(5, 3, 330 + seed));
            const DensityMatrix c(random_mixed_state(5, 4, 340 + seed));
            const double dab = trace_distance(a, b);
            if (std::abs(dab - trace_distance(b, a)) > 1e-13) return false;
            if (dab < 0 || dab > 1 + 1e-12) return false;
            if (dab > trace_distance(a, c) + trace_distance(c, b) + 1e-12) return false;
        }
        detail << "symmetry, range and triangle inequality on 10 random triples";
        return true;
    });

    checker.run("norm_chain", [](std::ostringstream& detail) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto x = random_gue(6, 350 + seed);
            const double op = operator_norm(x), hs = hs_norm(x), tn = trace_norm(x);
            if (op > hs + 1e-12 || hs > tn + 1e-12) return false;
        }
        detail << "operator <= HS <= trace norm on 10 random Hermitian matrices";
        return true;
    });

    checker.run("rank_trace_norm_inequality", [](std::ostringstream& detail) {
        Rng rng(360);
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 8, r = 1 + trial % 3;
            std::vector<cvec> vs;
            while (static_cast<int>(vs.size()) < r) {
                cvec v(d);
                for (auto& c : v) c = rng.complex_normal();
                for (const auto& u : vs) {
                    const cplx p = vdot(u, v);
                    for (int i = 0; i < d; ++i) v[i] -= p * u[i];
                }
                const double n = vnorm(v);
                for (auto& c : v) c /= n;
                vs.push_back(std::move(v));
            }
            CMat x(d);
            for (int i = 0; i < r; ++i)
                add_outer(x, vs[i], vs[i], (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0));
            const HermitianOperator hx(x);
            if (rank(hx) != r) return false;
            const double tn = trace_norm(hx), hs = hs_norm(hx);
            if (tn * tn > r * hs * hs * (1 + 1e-12)) return false;
        }
        detail << "trace_norm^2 <= rank * hs_norm^2 on 10 random low-rank matrices";
        return true;
    });

    checker.run("decomposition_roundtrip", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 3);
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CMat s_raw = random_gue(2, 370 + seed).mat();
            const cplx tr_s = trace(s_raw);
            for (int i = 0; i < 2; ++i) s_raw(i, i) -= tr_s / 2.0;
            CMat b_raw = random_gue(3, 380 + seed).mat();
            const cplx tr_b = trace(b_raw);
            for (int i = 0; i < 3; ++i) b_raw(i, i) -= tr_b / 3.0;
            const auto h_int = decompose(random_gue(6, 390 + seed), dims).h_int();

            const HermitianOperator h_s(std::move(s_raw)), h_b(std::move(b_raw));
            const auto composed = compose(h_s, h_b, h_int, 0.6, dims);
            const auto redone = decompose(composed.total(), dims);
            worst = std::max({worst, max_abs(redone.h_S().mat() - h_s.mat()),
                              max_abs(redone.h_B().mat() - h_b.mat()),
                              max_abs(redone.h_int().mat() - 0.6 * h_int.mat()),
                              std::abs(redone.h0_coeff())});
        }
        detail << "worst part deviation " << worst;
        return worst < 1e-12;
    });

    checker.run("decomposition_orthogonality", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 3);
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto h = decompose(random_gue(6, 400 + seed), dims);
            const CMat parts[4] = {h.h0_coeff() * CMat::identity(6),
                                   kron(h.h_S().mat(), CMat::identity(3)),
                                   kron(CMat::identity(2), h.h_B().mat()), h.h_int().mat()};
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    worst = std::max(worst, std::abs(trace(mul(parts[i], parts[j]))));
        }
        detail << "worst HS inner product between parts " << worst;
        return worst < 1e-12;
    });

    checker.run("decomposition_tracelessness", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 3);
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto h = decompose(random_gue(6, 410 + seed), dims);
            worst = std::max({worst, std::abs(trace(h.h_S().mat())),
                              std::abs(trace(h.h_B().mat())),
                              max_abs(partial_trace_bath(h.h_int(), dims).mat()),
                              max_abs(partial_trace_sys(h.h_int(), dims).mat())});
        }
        detail << "worst traceless residual " << worst;
        return worst < tol::norm;
    });

    checker.run("gap_check_canonical_spectra", [](std::ostringstream& detail) {
        const auto pass =
            check_nondegenerate_gaps(spectral_decomposition(decompose(diag_op({0, 1, 3, 7}),
                                                                      BipartiteDims(2, 2))));
        const auto fail_spacing =
            check_nondegenerate_gaps(spectral_decomposition(decompose(diag_op({0, 1, 2}),
                                                                      BipartiteDims(3, 1))));
        const auto fail_degen =
            check_nondegenerate_gaps(spectral_decomposition(decompose(diag_op({-2, 0, 0, 2}),
                                                                      BipartiteDims(2, 2))));
        detail << "{0,1,3,7} " << (pass.passed ? "pass" : "FAIL") << "; {0,1,2} "
               << (fail_spacing.passed ? "PASS" : "fail") << "; {-2,0,0,2} "
               << (fail_degen.passed ? "PASS" : "fail") << " with "
               << fail_degen.num_distinct_levels << " levels";
        return pass.passed && !fail_spacing.passed && !fail_degen.passed &&
               fail_degen.num_distinct_levels == 3;
    });

    checker.run("gue_gap_pass_rate", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 16);
        int passes = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed)
            if (check_nondegenerate_gaps(
                    spectral_decomposition(decompose(random_gue(32, 7000 + seed), dims)))
                    .passed)
                ++passes;
        detail << passes << "/100 seeds pass at D=32";
        return passes >= 99;
    });

    checker.run("bath_term_invisible", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 4);
        const auto h_b = random_gue(4, 420);
        double worst = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const CMat rho = random_mixed_state(8, 3, 430 + seed);
            const CMat comm =
                cplx{0.0, 1.0} * commutator(rho, kron(CMat::identity(2), h_b.mat()));
            worst = std::max(worst, max_abs(partial_trace_bath(HermitianOperator(comm), dims).mat()));
        }
        detail << "worst |tr_B(i[rho, I (x) H_B])| " << worst;
        return worst < 1e-12;
    });

    checker.run("constant_shift_independence", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 4);
        const auto base = random_gue(8, 440);
        const HermitianOperator shifted(base.mat() + 3.0 * CMat::identity(8));
        const PureState psi0(haar_vector(8, 441));
        auto h1 = decompose(base, dims);
        auto h2 = decompose(shifted, dims);
        const EvolutionContext c1(h1, spectral_decomposition(h1), psi0);
        const EvolutionContext c2(h2, spectral_decomposition(h2), psi0);
        double worst = 0;
        for (double t : {0.4, 2.9}) {
            const auto r1 = DensityMatrix::from_pure(evolve(c1, t));
            const auto r2 = DensityMatrix::from_pure(evolve(c2, t));
            worst = std::max(worst, max_abs(r1.mat() - r2.mat()));
            worst = std::max(worst, max_abs(subsystem_derivative(c1, t).mat() -
                                            subsystem_derivative(c2, t).mat()));
        }
        detail << "worst deviation under H -> H + 3I: " << worst;
        return worst < 1e-10;
    });

    checker.run("commutator_norm_bound", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 4);
        const auto h = decompose(random_gue(8, 450), dims);
        const double bound = 2.0 * coupling_norm(h);
        const CMat coupling = kron(h.h_S().mat(), CMat::identity(4)) + h.h_int().mat();
        const auto basis = hermitian_basis(2);
        double worst = 0;
        for (int k = 0; k < basis.size(); ++k) {
            const CMat comm = cplx{0.0, 1.0} * commutator(coupling,
                                                          kron(basis.element(k).mat(),
                                                               CMat::identity(4)));
            worst = std::max(worst, operator_norm(HermitianOperator(comm)));
        }
        detail << "max commutator norm " << worst << " vs bound " << bound;
        return worst <= bound + 1e-12;
    });

    checker.run("coefficient_sum_rule", [](std::ostringstream& detail) {
        const auto ctx = make_random_context(BipartiteDims(2, 5), 460);
        const auto basis = hermitian_basis(2);
        double worst = 0;
        for (double t : {0.3, 1.8}) {
            const auto coeffs = basis_coefficients(ctx, t, basis);
            double sum_sq = 0;
            for (double c : coeffs) sum_sq += c * c;
            const double hs = hs_norm(subsystem_derivative(ctx, t));
            worst = std::max(worst, std::abs(sum_sq - hs * hs));
        }
        detail << "worst |sum c_k^2 - ||drho_S/dt||_2^2| = " << worst;
        return worst < 1e-10;
    });

    checker.run("coefficient_two_routes", [](std::ostringstream& detail) {
        const auto ctx = make_random_context(BipartiteDims(2, 5), 470);
        const auto basis = hermitian_basis(2);
        double worst = 0;
        for (double t : {0.5, 2.2}) {
            const auto a = basis_coefficients(ctx, t, basis);
            const auto b = basis_coefficients_global(ctx, t, basis);
            for (int k = 0; k < basis.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
        }
        detail << "worst coefficient-route deviation " << worst;
        return worst < 1e-10;
    });

    checker.run("evolution_norm_preservation", [](std::ostringstream& detail) {
        const auto ctx = make_random_context(BipartiteDims(2, 6), 480);
        Rng rng(481);
        double worst = 0;
        for (int i = 0; i < 20; ++i)
            worst = std::max(worst,
                             std::abs(vnorm(evolve(ctx, rng.uniform(0.0, 500.0)).amplitudes()) - 1.0));
        detail << "worst norm deviation " << worst;
        return worst < 1e-12;
    });

    checker.run("derivative_matches_finite_difference", [](std::ostringstream& detail) {
        const auto ctx = make_random_context(BipartiteDims(2, 8), 490);
        const double delta = 1e-6;
        double worst = 0;
        for (double t : {0.2, 1.4}) {
            const CMat fd = (1.0 / (2.0 * delta)) * (subsystem_state(ctx, t + delta).mat() -
                                                     subsystem_state(ctx, t - delta).mat());
            worst = std::max(worst, max_abs(subsystem_derivative(ctx, t).mat() - fd));
        }
        detail << "worst entrywise deviation " << worst;
        return worst < 1e-6 * std::max(1.0, ctx.h_norm());
    });

    checker.run("omega_block_structure", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 2);
        auto h = decompose(diag_op({0, 0, 1, 3}), dims);
        auto spec = spectral_decomposition(h);
        const PureState psi0(haar_vector(4, 500));
        const CMat rho0 = outer(psi0.amplitudes(), psi0.amplitudes());
        const EvolutionContext ctx(h, spec, psi0);
        const auto eq = dephased_average(ctx);
        double worst = 0;
        for (int c = 0; c < spec.num_clusters(); ++c) {
            const CMat p = spec.projector(c);
            worst = std::max(worst, max_abs(mul(mul(p, eq.omega.mat()), p) - mul(mul(p, rho0), p)));
            worst = std::max(worst, max_abs(commutator(eq.omega.mat(), p)));
        }
        detail << "worst block deviation " << worst;
        return worst < 1e-12;
    });

    checker.run("omega_coefficient_average_zero", [](std::ostringstream& detail) {
        const auto ctx = make_random_context(BipartiteDims(2, 4), 510);
        const auto eq = dephased_average(ctx);
        const CMat comm = cplx{0.0, 1.0} * commutator(eq.omega.mat(), ctx.ham().total().mat());
        const auto basis = hermitian_basis(2);
        double worst = 0;
        for (int k = 0; k < basis.size(); ++k)
            worst = std::max(worst, std::abs(trace(mul(comm, kron(basis.element(k).mat(),
                                                                  CMat::identity(4))))));
        detail << "worst |tr(i[omega, H] e_k (x) I)| " << worst;
        return worst < 1e-10;
    });

    checker.run("d_eff_mixing_monotonicity", [](std::ostringstream& detail) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const int n = 6;
            const DensityMatrix rho(random_mixed_state(n, 3, 520 + seed));
            const double base = effective_dimension(rho);
            for (double eps : {0.01, 0.1}) {
                CMat mixed = (1.0 - eps) * rho.mat() + (eps / n) * CMat::identity(n);
                if (effective_dimension(DensityMatrix(std::move(mixed))) < base - 1e-12)
                    return false;
            }
        }
        detail << "d_eff((1-eps) rho + eps I/D) >= d_eff(rho) for eps in {0.01, 0.1}";
        return true;
    });

    checker.run("bound_formula_consistency", [](std::ostringstream& detail) {
        const BipartiteDims dims(2, 2);
        const double speed_base = speed_bound_rhs(dims, 0.731, 240.0);
        if (speed_bound_rhs(dims, 2.0 * 0.731, 240.0) != 2.0 * speed_base) return false;
        if (std::abs(speed_bound_rhs(dims, 1.0, 800.0) - 0.1) > 1e-15) return false;
        const DensityMatrix half(0.5 * CMat::identity(2));
        const EquilibriumData eq{half, half, half, 300.0, 200.0};
        const auto [tighter, looser] = distance_bound_rhs(dims, eq);
        detail << "speed linearity exact; distance bounds " << tighter << " <= " << looser;
        return tighter <= looser;
    });

    return checker.results;
}

}  // namespace eqsim
