#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

// Dense complex matrices and the Hermitian eigensolver everything else is built on.
//
// Index convention: row-major storage; in Kronecker products the left factor is
// the slowest-varying index.
namespace enthier {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Default numerical tolerance (rank cutoff, PSD slack).
inline constexpr double kTau = 1e-9;

class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const double> d);
    /// |v><v|
    static CMatrix outer(std::span<const cplx> v);
    /// |u><v|
    static CMatrix outer(std::span<const cplx> u, std::span<const cplx> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    CVector column(std::size_t c) const;

    const std::vector<cplx>& entries() const noexcept { return data_; }
    std::vector<cplx>& entries() noexcept { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
    friend CVector operator*(const CMatrix& a, std::span<const cplx> v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Ascending eigenvalues; eigenvectors are the columns of `vectors`.
struct EigenSystem {
    std::vector<double> values;
    CMatrix vectors;
};

/// Cyclic complex Jacobi. Input must be square and Hermitian within 1e-10
/// (relative to its largest entry); it is symmetrized before solving.
EigenSystem eig_hermitian(const CMatrix& h);

std::vector<double> eigenvalues_hermitian(const CMatrix& h);

struct PsdCheck {
    bool psd;
    double min_eigenvalue;
};

/// PSD iff min eigenvalue >= -tol * max(1, ||H||_2).
PsdCheck is_psd(const CMatrix& h, double tol = kTau);

/// Number of eigenvalues above tol * max(1, lambda_max).
std::size_t numeric_rank(std::span<const double> eigenvalues, double tol = kTau);
std::size_t numeric_rank(const CMatrix& h, double tol = kTau);

/// Applies f to the eigenvalues above the rank cutoff and zero elsewhere.
/// Throws if H has an eigenvalue below -tol * max(1, lambda_max).
CMatrix fn_on_support(const CMatrix& h, const std::function<double(double)>& f, double tol = kTau);

enum class ComposeMode { tensor, direct_sum };

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);
CMatrix compose(const CMatrix& a, const CMatrix& b, ComposeMode mode);

CVector kron(std::span<const cplx> a, std::span<const cplx> b);

cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // <x|y>
double norm(std::span<const cplx> x);
void normalize(CVector& x);

bool is_hermitian(const CMatrix& h, double tol = 1e-10);

}  // namespace enthier
