#pragma once

#include "enthier/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

// Pure states, density operators and the standard operations between them.
// Party 0 is the slowest-varying tensor index everywhere.
namespace enthier {

using Dims = std::vector<std::size_t>;
using PartySet = std::vector<std::size_t>;

std::size_t total_dim(std::span<const std::size_t> dims);

class PureState {
public:
    PureState() = default;
    /// Requires at least two parties, every dim >= 1 and unit norm within 1e-9
    /// (or any nonzero norm when `normalize` is set).
    PureState(Dims dims, CVector amps, bool normalize = false);

    static PureState product(const std::vector<CVector>& factors);

    const Dims& dims() const noexcept { return dims_; }
    const CVector& amps() const noexcept { return amps_; }
    std::size_t parties() const noexcept { return dims_.size(); }
    std::size_t dim() const noexcept { return amps_.size(); }

    cplx amplitude(std::span<const std::size_t> idx) const;

private:
    Dims dims_;
    CVector amps_;
};

class DensityOp {
public:
    DensityOp() = default;
    /// Validates Hermiticity (1e-10), unit trace (1e-9) and positivity (tol).
    DensityOp(Dims dims, CMatrix mat, double tol = kTau);

    /// Skips validation; for operators that are valid by construction.
    static DensityOp trusted(Dims dims, CMatrix mat);
    static DensityOp from_pure(const PureState& psi);

    const Dims& dims() const noexcept { return dims_; }
    const CMatrix& matrix() const noexcept { return mat_; }
    std::size_t parties() const noexcept { return dims_.size(); }
    std::size_t dim() const noexcept { return mat_.rows(); }

private:
    DensityOp(Dims dims, CMatrix mat, int /*trusted tag*/) : dims_(std::move(dims)), mat_(std::move(mat)) {}

    Dims dims_;
    CMatrix mat_;
};

struct SchmidtForm {
    std::vector<double> coefficients;  ///< descending, sqrt of the reduced eigenvalues
    std::vector<CVector> left_basis;
    std::vector<CVector> right_basis;
    PartySet left_parties;
    PartySet right_parties;
    Dims dims;  ///< dims of the original state

    PureState reconstruct() const;
};

/// New party k is old party order[k].
PureState permute_parties(const PureState& psi, std::span<const std::size_t> order);
DensityOp permute_parties(const DensityOp& rho, std::span<const std::size_t> order);

/// Reduced state on `keep`, with parties in the order given.
DensityOp reduce(const PureState& psi, const PartySet& keep);
DensityOp partial_trace(const DensityOp& rho, const PartySet& keep);

CMatrix partial_transpose(const DensityOp& rho, const PartySet& transposed);

/// Two-party view: `left` parties (in order) versus the remaining ones.
DensityOp regroup(const DensityOp& rho, const PartySet& left);

SchmidtForm schmidt(const PureState& psi, const PartySet& left, double tol = kTau);

/// Purification with the eigenbasis of rho as environment basis; the
/// environment is appended as the last party, with dimension rank(rho).
PureState purify(const DensityOp& rho, double tol = kTau);

/// Descending eigenvalues, tiny negative values clamped to zero.
std::vector<double> spectrum(const DensityOp& rho);

/// Von Neumann entropy in bits.
double entropy(const DensityOp& rho);
double entropy(std::span<const double> spectrum);

/// D(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
double rel_entropy(const DensityOp& rho, const DensityOp& sigma, double tol = kTau);

/// True iff x majorizes y (descending partial sums of x dominate, slack 1e-9).
bool majorizes(std::span<const double> x, std::span<const double> y);

/// l-infinity distance of two spectra after descending sort and zero padding.
double spectral_distance(std::span<const double> x, std::span<const double> y);

/// Ranks of the single-party reduced states.
std::vector<std::size_t> local_ranks(const PureState& psi, double tol = kTau);

/// Apply a local operator on one party (not necessarily unitary, no renormalization).
CVector apply_local(const PureState& psi, std::size_t party, const CMatrix& op);
PureState apply_local_unitaries(const PureState& psi, const std::vector<CMatrix>& unitaries);

double fidelity_pure(const PureState& a, const PureState& b);

}  // namespace enthier
