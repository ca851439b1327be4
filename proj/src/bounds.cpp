#include "eqsim/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "eqsim/rng.hpp"

namespace eqsim {

namespace {

constexpr const char* kEquispacedWarning =
    "equispaced time grid: empirical averages may alias against spectral gaps";

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_and_stderr(std::span<const double> xs) {
    MeanStderr r;
    const int n = static_cast<int>(xs.size());
    if (n == 0) throw std::invalid_argument("empirical mean of an empty sample");
    for (double x : xs) r.mean += x;
    r.mean /= n;
    if (n > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.stderr_ = std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
    }
    return r;
}

}  // namespace

BoundVerdict make_verdict(std::string name, double lhs, double lhs_stderr, double rhs,
                          std::string warning) {
    BoundVerdict v;
    v.name = std::move(name);
    v.lhs_empirical = lhs;
    v.lhs_stderr = lhs_stderr;
    v.rhs_bound = rhs;
    // absolute floor so zero-vs-zero comparisons survive rounding noise
    v.satisfied = lhs <= rhs + 3.0 * lhs_stderr + 1e-12;
    v.slack_ratio = lhs > 0 ? rhs / lhs : std::numeric_limits<double>::infinity();
    v.warning = std::move(warning);
    return v;
}

std::pair<double, double> distance_bound_rhs(const BipartiteDims& dims,
                                             const EquilibriumData& eq) {
    const double tighter = 0.5 * std::sqrt(dims.d_S / eq.d_eff_omega_B);
    const double looser = 0.5 * std::sqrt(static_cast<double>(dims.d_S) * dims.d_S / eq.d_eff_omega);
    return {tighter, looser};
}

double speed_bound_rhs(const BipartiteDims& dims, double coupling_norm, double d_eff_omega) {
    const double d_s = dims.d_S;
    return coupling_norm * std::sqrt(d_s * d_s * d_s / d_eff_omega);
}

double natural_units_speed(double avg_speed, double coupling_norm) {
    if (coupling_norm <= 0)
        throw std::invalid_argument("natural_units_speed: coupling norm must be positive");
    return avg_speed / coupling_norm;
}

double reimann_bound_rhs(const HermitianOperator& a, double d_eff_omega) {
    const double n = operator_norm(a);
    return n * n / d_eff_omega;
}

bool looks_equispaced(std::span<const double> times) {
    if (times.size() < 3) return false;
    const double step = (times.back() - times.front()) / (static_cast<double>(times.size()) - 1);
    if (step <= 0) return false;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double d = times[i] - times[i - 1];
        if (std::abs(d - step) > 1e-9 * step) return false;
    }
    return true;
}

BoundVerdict certify_distance(const Trajectory& traj, const EquilibriumData& eq,
                              const BipartiteDims& dims) {
    const auto [mean, se] = mean_and_stderr(traj.distances_to_equilibrium);
    const double rhs = distance_bound_rhs(dims, eq).second;
    std::string warning = looks_equispaced(traj.times) ? kEquispacedWarning : "";
    return make_verdict("distance_vs_equilibrium", mean, se, rhs, std::move(warning));
}

BoundVerdict certify_speed(const Trajectory& traj, const EquilibriumData& eq,
                           double coupling_norm, const BipartiteDims& dims) {
    const auto [mean, se] = mean_and_stderr(traj.speeds_analytic);
    const double rhs = speed_bound_rhs(dims, coupling_norm, eq.d_eff_omega);
    std::string warning = looks_equispaced(traj.times) ? kEquispacedWarning : "";
    return make_verdict("average_speed", mean, se, rhs, std::move(warning));
}

std::vector<BoundVerdict> certify_fraction(const Trajectory& traj, double rhs_bound,
                                           const std::vector<double>& k_values) {
    const auto& speeds = traj.speeds_analytic;
    if (speeds.empty()) throw std::invalid_argument("certify_fraction: empty trajectory");
    std::string warning = looks_equispaced(traj.times) ? kEquispacedWarning : "";

    std::vector<BoundVerdict> verdicts;
    verdicts.reserve(k_values.size());
    for (const double k : k_values) {
        if (k <= 1.0) throw std::invalid_argument("certify_fraction: K values must exceed 1");
        int count = 0;
        for (double s : speeds)
            if (s > k * rhs_bound + 1e-12) ++count;  // same rounding floor as the verdict rule
        const double n = static_cast<double>(speeds.size());
        const double frac = count / n;
        const double se = std::sqrt(frac * (1.0 - frac) / n);
        char name[48];
        std::snprintf(name, sizeof name, "speed_exceedance_K%g", k);
        verdicts.push_back(make_verdict(name, frac, se, 1.0 / k, warning));
    }
    return verdicts;
}

BoundVerdict certify_variance(const EvolutionContext& ctx, const HermitianOperator& a,
                              const EquilibriumData& eq, double horizon, int num_samples,
                              std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> times(num_samples);
    for (auto& t : times) t = rng.uniform(0.0, horizon);
    return certify_variance_at_times(ctx, a, eq, times);
}

BoundVerdict certify_variance_at_times(const EvolutionContext& ctx, const HermitianOperator& a,
                                       const EquilibriumData& eq, std::span<const double> times,
                                       double rhs_override) {
    const VarianceEstimate est = observable_variance_at_times(ctx, a, times, eq.omega);
    const double rhs = rhs_override >= 0 ? rhs_override : reimann_bound_rhs(a, eq.d_eff_omega);
    std::string warning = looks_equispaced(times) ? kEquispacedWarning : "";
    return make_verdict("observable_variance", est.mean, est.stderr_, rhs, std::move(warning));
}

}  // namespace eqsim
