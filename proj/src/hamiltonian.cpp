#include "eqsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eqsim/rng.hpp"

namespace eqsim {

HamiltonianDecomposition::HamiltonianDecomposition(BipartiteDims dims, HermitianOperator total,
                                                   double h0_coeff, HermitianOperator h_S,
                                                   HermitianOperator h_B, HermitianOperator h_int)
    : dims_(dims),
      total_(std::move(total)),
      h0_coeff_(h0_coeff),
      h_S_(std::move(h_S)),
      h_B_(std::move(h_B)),
      h_int_(std::move(h_int)) {
    if (total_.dim() != dims_.D || h_int_.dim() != dims_.D || h_S_.dim() != dims_.d_S ||
        h_B_.dim() != dims_.d_B)
        throw std::invalid_argument("HamiltonianDecomposition: part dimensions inconsistent");
    if (std::abs(trace(h_S_.mat())) > tol::norm || std::abs(trace(h_B_.mat())) > tol::norm)
        throw std::invalid_argument("HamiltonianDecomposition: local parts must be traceless");
    const CMat pt_b = partial_trace_bath(h_int_, dims_).mat();
    const CMat pt_s = partial_trace_sys(h_int_, dims_).mat();
    if (max_abs(pt_b) > tol::norm || max_abs(pt_s) > tol::norm)
        throw std::invalid_argument(
            "HamiltonianDecomposition: interaction must be traceless on both factors");
    CMat rebuilt = h0_coeff_ * CMat::identity(dims_.D) +
                   kron(h_S_.mat(), CMat::identity(dims_.d_B)) +
                   kron(CMat::identity(dims_.d_S), h_B_.mat()) + h_int_.mat();
    if (max_abs(rebuilt - total_.mat()) > tol::herm * dims_.D)
        throw std::invalid_argument("HamiltonianDecomposition: parts do not reconstruct total");
}

SpectralData::SpectralData(std::vector<double> eigenvalues, CMat eigenvectors,
                           std::vector<std::pair<int, int>> clusters)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      clusters_(std::move(clusters)) {
    if (eigenvalues_.empty() || eigenvectors_.dim() != static_cast<int>(eigenvalues_.size()))
        throw std::invalid_argument("SpectralData: inconsistent sizes");
    int covered = 0;
    for (const auto& [b, e] : clusters_) {
        if (b != covered || e <= b) throw std::invalid_argument("SpectralData: bad clusters");
        covered = e;
    }
    if (covered != static_cast<int>(eigenvalues_.size()))
        throw std::invalid_argument("SpectralData: clusters do not cover spectrum");
}

double SpectralData::cluster_energy(int c) const {
    const auto [b, e] = clusters_[c];
    double s = 0;
    for (int j = b; j < e; ++j) s += eigenvalues_[j];
    return s / (e - b);
}

CMat SpectralData::projector(int c) const {
    const auto [b, e] = clusters_[c];
    const int n = eigenvectors_.dim();
    CMat p(n);
    for (int j = b; j < e; ++j) {
        cvec v(n);
        for (int i = 0; i < n; ++i) v[i] = eigenvectors_(i, j);
        add_outer(p, v, v, 1.0);
    }
    return p;
}

double SpectralData::operator_norm() const {
    return std::max(std::abs(eigenvalues_.front()), std::abs(eigenvalues_.back()));
}

HamiltonianDecomposition decompose(const HermitianOperator& total, const BipartiteDims& dims) {
    if (total.dim() != dims.D)
        throw std::invalid_argument("decompose: total dimension does not match dims");

    const double h0 = trace(total.mat()).real() / dims.D;

    CMat s_part = partial_trace_bath(total, dims).mat();
    s_part *= 1.0 / dims.d_B;
    for (int i = 0; i < dims.d_S; ++i) s_part(i, i) -= h0;

    CMat b_part = partial_trace_sys(total, dims).mat();
    b_part *= 1.0 / dims.d_S;
    for (int i = 0; i < dims.d_B; ++i) b_part(i, i) -= h0;

    CMat interaction = total.mat() - h0 * CMat::identity(dims.D) -
                       kron(s_part, CMat::identity(dims.d_B)) -
                       kron(CMat::identity(dims.d_S), b_part);

    return HamiltonianDecomposition(dims, total, h0, HermitianOperator(std::move(s_part)),
                                    HermitianOperator(std::move(b_part)),
                                    HermitianOperator(std::move(interaction)));
}

HamiltonianDecomposition compose(const HermitianOperator& h_S, const HermitianOperator& h_B,
                                 const HermitianOperator& h_int, double lambda,
                                 const BipartiteDims& dims) {
    if (h_S.dim() != dims.d_S || h_B.dim() != dims.d_B || h_int.dim() != dims.D)
        throw std::invalid_argument("compose: part dimensions do not match dims");
    CMat total = kron(h_S.mat(), CMat::identity(dims.d_B)) +
                 kron(CMat::identity(dims.d_S), h_B.mat()) + lambda * h_int.mat();
    return decompose(HermitianOperator(std::move(total)), dims);
}

SpectralData spectral_decomposition(const HamiltonianDecomposition& h) {
    auto [values, vectors] = eigh(h.total().mat());

    const double range = values.back() - values.front();
    const double tol_deg = tol::deg_rel * range;
    std::vector<std::pair<int, int>> clusters;
    int begin = 0;
    for (int j = 1; j <= static_cast<int>(values.size()); ++j) {
        if (j == static_cast<int>(values.size()) || values[j] - values[j - 1] > tol_deg) {
            clusters.emplace_back(begin, j);
            begin = j;
        }
    }
    return SpectralData(std::move(values), std::move(vectors), std::move(clusters));
}

GapReport check_nondegenerate_gaps(const SpectralData& spec) {
    GapReport report;
    const int num_levels = spec.num_clusters();
    report.num_distinct_levels = num_levels;
    report.min_gap_separation = std::numeric_limits<double>::infinity();

    std::vector<double> levels(num_levels);
    for (int c = 0; c < num_levels; ++c) levels[c] = spec.cluster_energy(c);

    // All inter-level gaps, sorted; colliding gaps show up adjacent. This is
    // equivalent to the quadruple condition once zero gaps (within-level) and
    // identical pairs are excluded.
    struct Gap {
        double value;
        int lo, hi;
    };
    std::vector<Gap> gaps;
    gaps.reserve(static_cast<std::size_t>(num_levels) * (num_levels - 1) / 2);
    for (int i = 0; i < num_levels; ++i)
        for (int j = i + 1; j < num_levels; ++j) gaps.push_back({levels[j] - levels[i], i, j});
    if (gaps.size() < 2) return report;

    std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.value < b.value; });

    const double tol_gap = tol::gap_rel * spec.spectral_range();
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
        const double sep = gaps[k + 1].value - gaps[k].value;
        if (sep <= tol_gap) {
            report.passed = false;
            if (static_cast<int>(report.colliding_pairs.size()) < GapReport::max_reported_collisions)
                report.colliding_pairs.push_back(
                    {gaps[k].hi, gaps[k].lo, gaps[k + 1].hi, gaps[k + 1].lo});
        } else {
            report.min_gap_separation = std::min(report.min_gap_separation, sep);
        }
    }
    return report;
}

HermitianOperator random_gue(int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("random_gue: d must be positive");
    Rng rng(seed);
    CMat m(d);
    for (int i = 0; i < d; ++i) {
        m(i, i) = rng.normal();
        for (int j = i + 1; j < d; ++j) {
            const cplx z = rng.complex_normal();
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    }
    const auto evals = eigvalsh(m);
    const double top = std::max(std::abs(evals.front()), std::abs(evals.back()));
    if (top > 0) m *= 1.0 / top;
    return HermitianOperator(std::move(m));
}

double coupling_norm(const HamiltonianDecomposition& h) {
    CMat acting = kron(h.h_S().mat(), CMat::identity(h.dims().d_B)) + h.h_int().mat();
    return operator_norm(HermitianOperator(std::move(acting)));
}

}  // namespace eqsim
