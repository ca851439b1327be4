#include "eqsim/qcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eqsim {

namespace {

void require_dims_match(int got, int want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                    std::to_string(got) + ", want " + std::to_string(want) + ")");
}

}  // namespace

BipartiteDims::BipartiteDims(int subsystem_dim, int bath_dim)
    : d_S(subsystem_dim), d_B(bath_dim), D(subsystem_dim * bath_dim) {
    if (d_S < 2) throw std::invalid_argument("BipartiteDims: d_S must be >= 2");
    if (d_B < 1) throw std::invalid_argument("BipartiteDims: d_B must be >= 1");
}

HermitianOperator::HermitianOperator(CMat entries) : m_(std::move(entries)) {
    if (m_.dim() < 1) throw std::invalid_argument("HermitianOperator: dim must be positive");
    const double dev = herm_deviation(m_);
    if (dev > tol::herm)
        throw std::invalid_argument("HermitianOperator: not Hermitian (deviation " +
                                    std::to_string(dev) + ")");
}

PureState::PureState(cvec amplitudes) : v_(std::move(amplitudes)) {
    if (v_.empty()) throw std::invalid_argument("PureState: dim must be positive");
    const double n = vnorm(v_);
    if (std::abs(n - 1.0) > tol::norm)
        throw std::invalid_argument("PureState: norm " + std::to_string(n) + " is not 1");
}

DensityMatrix::DensityMatrix(CMat entries) : m_(std::move(entries)) {
    if (m_.dim() < 1) throw std::invalid_argument("DensityMatrix: dim must be positive");
    if (herm_deviation(m_) > tol::herm)
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    const double tr = trace(m_).real();
    if (std::abs(tr - 1.0) > tol::norm)
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    const auto evals = eigvalsh(m_);
    if (evals.front() < -tol::psd)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(evals.front()));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(outer(psi.amplitudes(), psi.amplitudes()));
}

OperatorBasis::OperatorBasis(int d, std::vector<HermitianOperator> elements)
    : d_(d), elements_(std::move(elements)) {
    if (d_ < 1) throw std::invalid_argument("OperatorBasis: d must be positive");
    if (static_cast<int>(elements_.size()) != d_ * d_)
        throw std::invalid_argument("OperatorBasis: expected d^2 elements");
    for (const auto& e : elements_)
        require_dims_match(e.dim(), d_, "OperatorBasis element");
    for (std::size_t k = 0; k < elements_.size(); ++k)
        for (std::size_t l = k; l < elements_.size(); ++l) {
            const cplx g = trace(mul(elements_[k].mat(), elements_[l].mat()));
            const double want = (k == l) ? 1.0 : 0.0;
            if (std::abs(g - want) > tol::orth)
                throw std::invalid_argument("OperatorBasis: Gram matrix is not the identity");
        }
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(kron(a.mat(), b.mat()));
}

namespace {

CMat partial_trace_bath_raw(const CMat& x, const BipartiteDims& dims) {
    require_dims_match(x.dim(), dims.D, "partial_trace_bath");
    CMat r(dims.d_S);
    for (int i = 0; i < dims.d_S; ++i)
        for (int j = 0; j < dims.d_S; ++j) {
            cplx s = 0;
            for (int b = 0; b < dims.d_B; ++b) s += x(i * dims.d_B + b, j * dims.d_B + b);
            r(i, j) = s;
        }
    return r;
}

CMat partial_trace_sys_raw(const CMat& x, const BipartiteDims& dims) {
    require_dims_match(x.dim(), dims.D, "partial_trace_sys");
    CMat r(dims.d_B);
    for (int a = 0; a < dims.d_B; ++a)
        for (int b = 0; b < dims.d_B; ++b) {
            cplx s = 0;
            for (int i = 0; i < dims.d_S; ++i) s += x(i * dims.d_B + a, i * dims.d_B + b);
            r(a, b) = s;
        }
    return r;
}

}  // namespace

HermitianOperator partial_trace_bath(const HermitianOperator& x, const BipartiteDims& dims) {
    return HermitianOperator(partial_trace_bath_raw(x.mat(), dims));
}

HermitianOperator partial_trace_sys(const HermitianOperator& x, const BipartiteDims& dims) {
    return HermitianOperator(partial_trace_sys_raw(x.mat(), dims));
}

DensityMatrix partial_trace_bath(const DensityMatrix& rho, const BipartiteDims& dims) {
    return DensityMatrix(partial_trace_bath_raw(rho.mat(), dims));
}

DensityMatrix partial_trace_sys(const DensityMatrix& rho, const BipartiteDims& dims) {
    return DensityMatrix(partial_trace_sys_raw(rho.mat(), dims));
}

CMat pure_partial_trace_bath(const cvec& psi, const BipartiteDims& dims) {
    if (static_cast<int>(psi.size()) != dims.D)
        throw std::invalid_argument("pure_partial_trace_bath: dimension mismatch");
    CMat r(dims.d_S);
    for (int i = 0; i < dims.d_S; ++i)
        for (int j = 0; j <= i; ++j) {
            cplx s = 0;
            for (int b = 0; b < dims.d_B; ++b)
                s += psi[i * dims.d_B + b] * std::conj(psi[j * dims.d_B + b]);
            r(i, j) = s;
            r(j, i) = std::conj(s);
        }
    for (int i = 0; i < dims.d_S; ++i) r(i, i) = r(i, i).real();
    return r;
}

CMat pure_partial_trace_sys(const cvec& psi, const BipartiteDims& dims) {
    if (static_cast<int>(psi.size()) != dims.D)
        throw std::invalid_argument("pure_partial_trace_sys: dimension mismatch");
    CMat r(dims.d_B);
    for (int a = 0; a < dims.d_B; ++a)
        for (int b = 0; b <= a; ++b) {
            cplx s = 0;
            for (int i = 0; i < dims.d_S; ++i)
                s += psi[i * dims.d_B + a] * std::conj(psi[i * dims.d_B + b]);
            r(a, b) = s;
            r(b, a) = std::conj(s);
        }
    for (int a = 0; a < dims.d_B; ++a) r(a, a) = r(a, a).real();
    return r;
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    require_dims_match(r2.dim(), r1.dim(), "trace_distance");
    const auto evals = eigvalsh(r1.mat() - r2.mat());
    double s = 0;
    for (double e : evals) s += std::abs(e);
    return 0.5 * s;
}

double trace_norm(const HermitianOperator& x) {
    const auto evals = eigvalsh(x.mat());
    double s = 0;
    for (double e : evals) s += std::abs(e);
    return s;
}

double hs_norm(const HermitianOperator& x) {
    return frobenius_norm(x.mat());
}

double operator_norm(const HermitianOperator& x) {
    const auto evals = eigvalsh(x.mat());
    return std::max(std::abs(evals.front()), std::abs(evals.back()));
}

int rank(const HermitianOperator& x) {
    const auto evals = eigvalsh(x.mat());
    const double top = std::max(std::abs(evals.front()), std::abs(evals.back()));
    const double cut = tol::rank_rel * top;
    int r = 0;
    for (double e : evals)
        if (std::abs(e) > cut) ++r;
    return r;
}

OperatorBasis hermitian_basis(int d) {
    if (d < 1) throw std::invalid_argument("hermitian_basis: d must be positive");
    std::vector<HermitianOperator> elems;
    elems.reserve(static_cast<std::size_t>(d) * d);

    CMat id(d);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) id(i, i) = inv_sqrt_d;
    elems.emplace_back(std::move(id));

    const double inv_sqrt2 = 0.7071067811865475244;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMat sym(d);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            elems.emplace_back(std::move(sym));
        }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMat asym(d);
            asym(j, k) = cplx{0.0, -inv_sqrt2};
            asym(k, j) = cplx{0.0, inv_sqrt2};
            elems.emplace_back(std::move(asym));
        }
    for (int l = 1; l < d; ++l) {
        CMat diag(d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) diag(j, j) = scale;
        diag(l, l) = -static_cast<double>(l) * scale;
        elems.emplace_back(std::move(diag));
    }

    return OperatorBasis(d, std::move(elems));
}

}  // namespace eqsim
