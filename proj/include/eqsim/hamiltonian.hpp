#ifndef EQSIM_HAMILTONIAN_HPP
#define EQSIM_HAMILTONIAN_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "eqsim/qcore.hpp"

namespace eqsim {

// Unique split H = h0*I + h_S (x) I + I (x) h_B + h_int with h_S, h_B
// traceless and h_int traceless over each factor (operator partial traces).
class HamiltonianDecomposition {
public:
    HamiltonianDecomposition(BipartiteDims dims, HermitianOperator total, double h0_coeff,
                             HermitianOperator h_S, HermitianOperator h_B,
                             HermitianOperator h_int);

    const BipartiteDims& dims() const { return dims_; }
    const HermitianOperator& total() const { return total_; }
    double h0_coeff() const { return h0_coeff_; }
    const HermitianOperator& h_S() const { return h_S_; }
    const HermitianOperator& h_B() const { return h_B_; }
    const HermitianOperator& h_int() const { return h_int_; }

private:
    BipartiteDims dims_;
    HermitianOperator total_;
    double h0_coeff_;
    HermitianOperator h_S_;
    HermitianOperator h_B_;
    HermitianOperator h_int_;
};

// Full spectrum of a Hamiltonian with eigenvalues grouped into degenerate
// clusters. Cluster projectors are built on demand from the eigenvector
// columns (a projector per cluster would be O(D^3) memory up front).
class SpectralData {
public:
    SpectralData(std::vector<double> eigenvalues, CMat eigenvectors,
                 std::vector<std::pair<int, int>> clusters);

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const CMat& eigenvectors() const { return eigenvectors_; }

    int num_clusters() const { return static_cast<int>(clusters_.size()); }
    // half-open index range [first, second) into the ascending eigenvalues
    std::pair<int, int> cluster(int c) const { return clusters_[c]; }
    double cluster_energy(int c) const;  // mean eigenvalue of the cluster
    CMat projector(int c) const;

    double spectral_range() const { return eigenvalues_.back() - eigenvalues_.front(); }
    double operator_norm() const;  // max |eigenvalue|

private:
    std::vector<double> eigenvalues_;
    CMat eigenvectors_;
    std::vector<std::pair<int, int>> clusters_;
};

struct GapReport {
    bool passed = true;
    int num_distinct_levels = 0;
    // smallest difference between distinct inter-level gaps; +inf when
    // fewer than two gaps exist
    double min_gap_separation = 0.0;
    // offending 4-tuples of level indices (j1, i1, j2, i2) with
    // E[j1]-E[i1] = E[j2]-E[i2]; capped at max_reported_collisions
    std::vector<std::array<int, 4>> colliding_pairs;
    static constexpr int max_reported_collisions = 256;
};

HamiltonianDecomposition decompose(const HermitianOperator& total, const BipartiteDims& dims);

// Builds h_S (x) I + I (x) h_B + lambda * h_int and decomposes it. Traceful
// or locally-traceful inputs are redistributed into the unique split.
HamiltonianDecomposition compose(const HermitianOperator& h_S, const HermitianOperator& h_B,
                                 const HermitianOperator& h_int, double lambda,
                                 const BipartiteDims& dims);

SpectralData spectral_decomposition(const HamiltonianDecomposition& h);

GapReport check_nondegenerate_gaps(const SpectralData& spec);

// GUE draw normalized to unit operator norm. Same seed, same matrix.
HermitianOperator random_gue(int d, std::uint64_t seed);

// Operator norm of h_S (x) I + h_int, the part acting on the subsystem.
double coupling_norm(const HamiltonianDecomposition& h);

}  // namespace eqsim

#endif
