#include "enthier/linalg.hpp"

#include "enthier/error.hpp"
#include "enthier/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace enthier {

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) throw Error("CMatrix: entry count does not match shape");
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error("CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::outer(std::span<const cplx> v) { return outer(v, v); }

CMatrix CMatrix::outer(std::span<const cplx> u, std::span<const cplx> v) {
    CMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

CVector CMatrix::column(std::size_t c) const {
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

cplx CMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const { return std::sqrt(kernels::norm2(data_.data(), data_.size())); }

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("CMatrix +=: shape mismatch");
    kernels::axpy(1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("CMatrix -=: shape mismatch");
    kernels::axpy(-1.0, o.data_.data(), data_.data(), data_.size());
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("CMatrix *: inner dimension mismatch");
    CMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        cplx* out = c.data_.data() + i * c.cols_;
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            kernels::axpy(aik, b.data_.data() + k * b.cols_, out, b.cols_);
        }
    }
    return c;
}

CVector operator*(const CMatrix& a, std::span<const cplx> v) {
    if (a.cols_ != v.size()) throw Error("CMatrix * vector: dimension mismatch");
    CVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        cplx s = 0.0;
        const cplx* r = a.data_.data() + i * a.cols_;
        for (std::size_t k = 0; k < a.cols_; ++k) s += r[k] * v[k];
        out[i] = s;
    }
    return out;
}

bool is_hermitian(const CMatrix& h, double tol) {
    if (!h.square()) return false;
    const double scale = std::max(1.0, h.max_abs());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = i; j < h.cols(); ++j)
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol * scale) return false;
    return true;
}

namespace {

// Makes the first largest-magnitude component real and positive.
void fix_phase(std::span<cplx> v) {
    std::size_t best = 0;
    double mag = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > mag * (1.0 + 1e-12)) {
            mag = a;
            best = i;
        }
    }
    if (mag <= 0.0) return;
    const cplx phase = std::conj(v[best]) / mag;
    for (cplx& z : v) z *= phase;
}

}  // namespace

EigenSystem eig_hermitian(const CMatrix& h) {
    if (!h.square()) throw Error("eig_hermitian: matrix is not square (" + std::to_string(h.rows()) + "x" +
                                 std::to_string(h.cols()) + ")");
    if (!is_hermitian(h)) throw Error("eig_hermitian: matrix is not Hermitian within 1e-10");
    const std::size_t n = h.rows();

    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    // Row k of `w` is eigenvector k (column k of V).
    CMatrix w = CMatrix::identity(n);

    const double fro = a.frobenius_norm();
    const double target = 1e-15 * fro;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= target || off == 0.0) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx b = a(p, q);
                const double mag = std::abs(b);
                if (mag <= 1e-300) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double zeta = (aqq - app) / (2.0 * mag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx e = std::conj(b) / mag;  // e^{-i phi}
                // U = [[c, s], [-s e, c e]]
                const cplx u00 = c, u01 = s, u10 = -s * e, u11 = c * e;

                // Rows p, q of U^dagger A.
                const cplx urow[4] = {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
                kernels::rot2(a.row(p).data(), a.row(q).data(), n, urow);
                // Columns p, q follow from Hermiticity of U^dagger A U.
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a(k, p) = std::conj(a(p, k));
                    a(k, q) = std::conj(a(q, k));
                }
                const cplx cpp = a(p, p), cpq = a(p, q), cqp = a(q, p), cqq = a(q, q);
                a(p, p) = (cpp * u00 + cpq * u10).real();
                a(q, q) = (cqp * u01 + cqq * u11).real();
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                const cplx uvec[4] = {u00, u10, u01, u11};
                kernels::rot2(w.row(p).data(), w.row(q).data(), n, uvec);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        CVector v(w.row(order[k]).begin(), w.row(order[k]).end());
        fix_phase(v);
        for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v[i];
    }
    return es;
}

std::vector<double> eigenvalues_hermitian(const CMatrix& h) { return eig_hermitian(h).values; }

PsdCheck is_psd(const CMatrix& h, double tol) {
    const auto vals = eigenvalues_hermitian(h);
    if (vals.empty()) return {true, 0.0};
    const double norm2 = std::max(std::abs(vals.front()), std::abs(vals.back()));
    return {vals.front() >= -tol * std::max(1.0, norm2), vals.front()};
}

std::size_t numeric_rank(std::span<const double> eigenvalues, double tol) {
    if (eigenvalues.empty()) return 0;
    const double top = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    const double cut = tol * std::max(1.0, top);
    return static_cast<std::size_t>(
        std::count_if(eigenvalues.begin(), eigenvalues.end(), [cut](double l) { return l > cut; }));
}

std::size_t numeric_rank(const CMatrix& h, double tol) {
    const auto vals = eigenvalues_hermitian(h);
    return numeric_rank(vals, tol);
}

CMatrix fn_on_support(const CMatrix& h, const std::function<double(double)>& f, double tol) {
    const EigenSystem es = eig_hermitian(h);
    const std::size_t n = es.values.size();
    CMatrix out(n, n);
    if (n == 0) return out;
    const double cut = tol * std::max(1.0, es.values.back());
    if (es.values.front() < -cut)
        throw Error("fn_on_support: matrix is not PSD (eigenvalue " + std::to_string(es.values.front()) + ")");
    for (std::size_t k = 0; k < n; ++k) {
        if (es.values[k] <= cut) continue;
        const double fk = f(es.values[k]);
        const CVector v = es.vectors.column(k);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = fk * v[i];
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(v[j]);
        }
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
    return out;
}

CMatrix compose(const CMatrix& a, const CMatrix& b, ComposeMode mode) {
    return mode == ComposeMode::tensor ? kron(a, b) : direct_sum(a, b);
}

CVector kron(std::span<const cplx> a, std::span<const cplx> b) {
    CVector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.size() != y.size()) throw Error("inner: dimension mismatch");
    return kernels::dotc(x.data(), y.data(), x.size());
}

double norm(std::span<const cplx> x) { return std::sqrt(kernels::norm2(x.data(), x.size())); }

void normalize(CVector& x) {
    const double n = norm(x);
    if (n == 0.0) throw Error("normalize: zero vector");
    for (cplx& z : x) z /= n;
}

}  // namespace enthier
