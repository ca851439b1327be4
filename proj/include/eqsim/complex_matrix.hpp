#ifndef EQSIM_COMPLEX_MATRIX_HPP
#define EQSIM_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace eqsim {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Dense square complex matrix, row-major.
class CMat {
public:
    CMat() = default;
    explicit CMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    static CMat identity(int n);

    int dim() const { return n_; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    CMat& operator+=(const CMat& o);
    CMat& operator-=(const CMat& o);
    CMat& operator*=(cplx s);

    friend CMat operator+(CMat a, const CMat& b) { a += b; return a; }
    friend CMat operator-(CMat a, const CMat& b) { a -= b; return a; }
    friend CMat operator*(cplx s, CMat a) { a *= s; return a; }
    friend CMat operator*(CMat a, cplx s) { a *= s; return a; }

private:
    int n_ = 0;
    cvec a_;
};

CMat mul(const CMat& a, const CMat& b);
CMat adjoint(const CMat& a);
cplx trace(const CMat& a);
CMat commutator(const CMat& a, const CMat& b);   // ab - ba
CMat kron(const CMat& a, const CMat& b);         // row-major convention: index = i_a*dim_b + i_b

cvec matvec(const CMat& a, const cvec& x);
cplx vdot(const cvec& a, const cvec& b);         // conj(a).b
double vnorm(const cvec& a);
CMat outer(const cvec& v, const cvec& w);        // v w^dag
void add_outer(CMat& m, const cvec& v, const cvec& w, cplx coeff);  // m += coeff v w^dag

double herm_deviation(const CMat& a);            // max_ij |a_ij - conj(a_ji)|
double max_abs(const CMat& a);
double frobenius_norm(const CMat& a);

// Hermitian eigendecomposition (LAPACK zheevd). Eigenvalues ascending,
// eigenvector j stored as column j of `vectors`.
struct EighResult {
    std::vector<double> values;
    CMat vectors;
};
EighResult eigh(const CMat& a);
std::vector<double> eigvalsh(const CMat& a);

}  // namespace eqsim

#endif
