#ifndef EQSIM_QCORE_HPP
#define EQSIM_QCORE_HPP

#include <vector>

#include "eqsim/complex_matrix.hpp"

namespace eqsim {

// Validation tolerances. Absolute values assume unit-scale normalized
// inputs; relative ones are scaled by the quantity named in the suffix.
namespace tol {
inline constexpr double herm = 1e-10;      // Hermiticity deviation
inline constexpr double norm = 1e-10;      // state norm / trace deviations
inline constexpr double psd = 1e-9;        // allowed negative eigenvalue magnitude
inline constexpr double orth = 1e-10;      // operator-basis orthonormality
inline constexpr double rank_rel = 1e-9;   // rank cutoff, relative to operator norm
inline constexpr double deg_rel = 1e-9;    // degeneracy clustering, relative to spectral range
inline constexpr double gap_rel = 1e-9;    // gap collision, relative to spectral range
inline constexpr double eig_rel = 1e-9;    // eigenpair residual, relative to operator norm
}  // namespace tol

// Subsystem/bath split of the total Hilbert space. Global index
// convention is subsystem-major: index = i_S * d_B + i_B.
struct BipartiteDims {
    int d_S;
    int d_B;
    int D;

    BipartiteDims(int subsystem_dim, int bath_dim);
};

class HermitianOperator {
public:
    explicit HermitianOperator(CMat entries);

    static HermitianOperator zero(int dim) { return HermitianOperator(CMat(dim)); }
    static HermitianOperator identity(int dim) { return HermitianOperator(CMat::identity(dim)); }

    int dim() const { return m_.dim(); }
    const CMat& mat() const { return m_; }

private:
    CMat m_;
};

class PureState {
public:
    explicit PureState(cvec amplitudes);

    int dim() const { return static_cast<int>(v_.size()); }
    const cvec& amplitudes() const { return v_; }

private:
    cvec v_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(CMat entries);

    static DensityMatrix from_pure(const PureState& psi);

    int dim() const { return m_.dim(); }
    const CMat& mat() const { return m_; }

private:
    CMat m_;
};

// Hilbert-Schmidt orthonormal Hermitian basis, tr(e_k e_l) = delta_kl.
class OperatorBasis {
public:
    OperatorBasis(int d, std::vector<HermitianOperator> elements);

    int d() const { return d_; }
    int size() const { return static_cast<int>(elements_.size()); }
    const HermitianOperator& element(int k) const { return elements_[k]; }
    const std::vector<HermitianOperator>& elements() const { return elements_; }

private:
    int d_;
    std::vector<HermitianOperator> elements_;
};

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

// Operator partial traces (no normalization); the density-matrix overloads
// rewrap the same kernels.
HermitianOperator partial_trace_bath(const HermitianOperator& x, const BipartiteDims& dims);
HermitianOperator partial_trace_sys(const HermitianOperator& x, const BipartiteDims& dims);
DensityMatrix partial_trace_bath(const DensityMatrix& rho, const BipartiteDims& dims);
DensityMatrix partial_trace_sys(const DensityMatrix& rho, const BipartiteDims& dims);

// Partial traces of a pure-state projector |psi><psi| without forming the
// D x D matrix.
CMat pure_partial_trace_bath(const cvec& psi, const BipartiteDims& dims);
CMat pure_partial_trace_sys(const cvec& psi, const BipartiteDims& dims);

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);
double trace_norm(const HermitianOperator& x);     // sum |eigenvalues|
double hs_norm(const HermitianOperator& x);        // sqrt tr(x^2)
double operator_norm(const HermitianOperator& x);  // max |eigenvalue|
int rank(const HermitianOperator& x);              // eigenvalues above tol::rank_rel * operator_norm

// Normalized identity plus the generalized Gell-Mann families (symmetric,
// antisymmetric, diagonal), each of unit Hilbert-Schmidt norm.
OperatorBasis hermitian_basis(int d);

}  // namespace eqsim

#endif
