#include "eqsim/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eqsim/rng.hpp"

namespace eqsim {

namespace {

// P_c |psi(0)> for each cluster, i.e. the eigenvector-span components of the
// initial state. omega is the sum of their projectors.
std::vector<cvec> cluster_components(const EvolutionContext& ctx) {
    const auto& spec = ctx.spec();
    const CMat& v = spec.eigenvectors();
    const cvec& u = ctx.energy_coeffs();
    const int D = ctx.dims().D;

    std::vector<cvec> comps;
    comps.reserve(spec.num_clusters());
    for (int c = 0; c < spec.num_clusters(); ++c) {
        const auto [b, e] = spec.cluster(c);
        cvec w(D, cplx{});
        for (int j = b; j < e; ++j) {
            const cplx uj = u[j];
            if (uj == cplx{}) continue;
            for (int i = 0; i < D; ++i) w[i] += v(i, j) * uj;
        }
        comps.push_back(std::move(w));
    }
    return comps;
}

std::vector<double> sample_times(double horizon, int num_samples, std::uint64_t seed) {
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
    Rng rng(seed);
    std::vector<double> times(num_samples);
    for (auto& t : times) t = rng.uniform(0.0, horizon);
    return times;
}

}  // namespace

EquilibriumData dephased_average(const EvolutionContext& ctx) {
    const int D = ctx.dims().D;
    CMat omega_raw(D);
    for (const cvec& w : cluster_components(ctx)) add_outer(omega_raw, w, w, 1.0);

    DensityMatrix omega(std::move(omega_raw));
    DensityMatrix omega_S = partial_trace_bath(omega, ctx.dims());
    DensityMatrix omega_B = partial_trace_sys(omega, ctx.dims());
    const double d_eff = effective_dimension(omega);
    const double d_eff_b = effective_dimension(omega_B);
    return EquilibriumData{std::move(omega), std::move(omega_S), std::move(omega_B), d_eff,
                           d_eff_b};
}

double effective_dimension(const DensityMatrix& rho) {
    const double purity = frobenius_norm(rho.mat());
    return 1.0 / (purity * purity);
}

DensityMatrix empirical_time_average(const EvolutionContext& ctx, double horizon, int num_samples,
                                     std::uint64_t seed) {
    const auto times = sample_times(horizon, num_samples, seed);
    CMat acc(ctx.dims().D);
    for (const double t : times) {
        const cvec psi = evolve(ctx, t).amplitudes();
        add_outer(acc, psi, psi, 1.0 / num_samples);
    }
    return DensityMatrix(std::move(acc));
}

double observable_expectation(const EvolutionContext& ctx, const HermitianOperator& a, double t) {
    if (a.dim() != ctx.dims().D)
        throw std::invalid_argument("observable_expectation: dimension mismatch");
    const cvec psi = evolve(ctx, t).amplitudes();
    return vdot(psi, matvec(a.mat(), psi)).real();
}

VarianceEstimate observable_variance_at_times(const EvolutionContext& ctx,
                                              const HermitianOperator& a,
                                              std::span<const double> times,
                                              const DensityMatrix& omega) {
    if (a.dim() != ctx.dims().D || omega.dim() != ctx.dims().D)
        throw std::invalid_argument("observable_variance_at_times: dimension mismatch");
    if (times.empty()) throw std::invalid_argument("observable_variance_at_times: no times");

    // exact infinite-time mean
    cplx mu = 0;
    for (int i = 0; i < omega.dim(); ++i)
        for (int j = 0; j < omega.dim(); ++j) mu += omega.mat()(i, j) * a.mat()(j, i);

    const int n = static_cast<int>(times.size());
    std::vector<double> dev_sq(n);
    for (int i = 0; i < n; ++i) {
        const double x = observable_expectation(ctx, a, times[i]);
        const double d = x - mu.real();
        dev_sq[i] = d * d;
    }

    VarianceEstimate est;
    est.n = n;
    for (double y : dev_sq) est.mean += y;
    est.mean /= n;
    if (n > 1) {
        double ss = 0;
        for (double y : dev_sq) ss += (y - est.mean) * (y - est.mean);
        est.stderr_ = std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
    }
    return est;
}

double observable_variance_empirical(const EvolutionContext& ctx, const HermitianOperator& a,
                                     double horizon, int num_samples, std::uint64_t seed) {
    if (a.dim() != ctx.dims().D)
        throw std::invalid_argument("observable_variance_empirical: dimension mismatch");
    const auto times = sample_times(horizon, num_samples, seed);

    // exact infinite-time mean from the cluster components of omega
    double mu = 0;
    for (const cvec& w : cluster_components(ctx)) mu += vdot(w, matvec(a.mat(), w)).real();

    double acc = 0;
    for (const double t : times) {
        const double d = observable_expectation(ctx, a, t) - mu;
        acc += d * d;
    }
    return acc / num_samples;
}

}  // namespace eqsim
