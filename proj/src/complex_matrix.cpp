#include "eqsim/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace eqsim {

CMat CMat::identity(int n) {
    CMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat& CMat::operator+=(const CMat& o) {
    if (o.n_ != n_) throw std::invalid_argument("CMat: dimension mismatch in +=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMat& CMat::operator-=(const CMat& o) {
    if (o.n_ != n_) throw std::invalid_argument("CMat: dimension mismatch in -=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMat& CMat::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

CMat mul(const CMat& a, const CMat& b) {
    const int n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("mul: dimension mismatch");
    CMat c(n);
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    cplx* pc = c.data();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = pa[static_cast<std::size_t>(i) * n + k];
            if (aik == cplx{}) continue;
            const cplx* brow = pb + static_cast<std::size_t>(k) * n;
            cplx* crow = pc + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

CMat adjoint(const CMat& a) {
    const int n = a.dim();
    CMat c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

cplx trace(const CMat& a) {
    cplx t = 0;
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

CMat commutator(const CMat& a, const CMat& b) {
    return mul(a, b) - mul(b, a);
}

CMat kron(const CMat& a, const CMat& b) {
    const int na = a.dim(), nb = b.dim();
    CMat c(na * nb);
    for (int ia = 0; ia < na; ++ia)
        for (int ja = 0; ja < na; ++ja) {
            const cplx aij = a(ia, ja);
            if (aij == cplx{}) continue;
            for (int ib = 0; ib < nb; ++ib)
                for (int jb = 0; jb < nb; ++jb)
                    c(ia * nb + ib, ja * nb + jb) = aij * b(ib, jb);
        }
    return c;
}

cvec matvec(const CMat& a, const cvec& x) {
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("matvec: dimension mismatch");
    cvec y(n);
    const cplx* pa = a.data();
    for (int i = 0; i < n; ++i) {
        cplx s = 0;
        const cplx* row = pa + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

cplx vdot(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vdot: dimension mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double vnorm(const cvec& a) {
    double s = 0;
    for (const auto& x : a) s += std::norm(x);
    return std::sqrt(s);
}

CMat outer(const cvec& v, const cvec& w) {
    const int n = static_cast<int>(v.size());
    if (w.size() != v.size()) throw std::invalid_argument("outer: dimension mismatch");
    CMat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
}

void add_outer(CMat& m, const cvec& v, const cvec& w, cplx coeff) {
    const int n = m.dim();
    if (static_cast<int>(v.size()) != n || static_cast<int>(w.size()) != n)
        throw std::invalid_argument("add_outer: dimension mismatch");
    cplx* p = m.data();
    for (int i = 0; i < n; ++i) {
        const cplx cv = coeff * v[i];
        if (cv == cplx{}) continue;
        cplx* row = p + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) row[j] += cv * std::conj(w[j]);
    }
}

double herm_deviation(const CMat& a) {
    double d = 0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j)
            d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

double max_abs(const CMat& a) {
    double d = 0;
    const cplx* p = a.data();
    const std::size_t total = static_cast<std::size_t>(a.dim()) * a.dim();
    for (std::size_t i = 0; i < total; ++i) d = std::max(d, std::abs(p[i]));
    return d;
}

double frobenius_norm(const CMat& a) {
    double s = 0;
    const cplx* p = a.data();
    const std::size_t total = static_cast<std::size_t>(a.dim()) * a.dim();
    for (std::size_t i = 0; i < total; ++i) s += std::norm(p[i]);
    return std::sqrt(s);
}

EighResult eigh(const CMat& a) {
    const int n = a.dim();
    EighResult r;
    r.values.resize(n);
    r.vectors = a;
    const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'L', n, r.vectors.data(), n,
                                           r.values.data());
    if (info != 0)
        throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
    return r;
}

std::vector<double> eigvalsh(const CMat& a) {
    const int n = a.dim();
    std::vector<double> w(n);
    CMat tmp = a;
    const lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'L', n, tmp.data(), n, w.data());
    if (info != 0)
        throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
    return w;
}

}  // namespace eqsim
