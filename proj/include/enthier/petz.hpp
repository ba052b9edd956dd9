#pragma once

#include "enthier/linalg.hpp"
#include "enthier/qstate.hpp"

#include <cstddef>
#include <vector>

// Exact recovery with the Petz map and the separable decomposition of rho_AB
// it produces for a tripartite pure state whose rho_BC is separable and
// satisfies H(rho_C) == H(rho_BC).
namespace enthier {

/// sum_i weights[i] |left_i, right_i><left_i, right_i|
struct SeparableDecomposition {
    Dims dims;  ///< {d_left, d_right}
    std::vector<double> weights;
    std::vector<CVector> left;
    std::vector<CVector> right;
    std::vector<std::size_t> origin;  ///< source term index (extraction output only)

    std::size_t size() const noexcept { return weights.size(); }
    CMatrix rebuild() const;
    /// Throws on inconsistent sizes, non-positive weights, weights not summing
    /// to one within 1e-9 or non-unit vectors.
    void validate() const;
};

/// Decomposition of a state that is block diagonal in the eigenbasis of one party.
SeparableDecomposition cq_decomposition(const DensityOp& rho, std::size_t classical_party, double tol = kTau);

/// sum_i p_i |phi_i^B, phi_i^C, i><...| on dims {d_B, d_C, terms}.
DensityOp build_extension(const SeparableDecomposition& dec);

/// Stinespring isometry U : C -> C (x) D (x) E, output index ((c*d_D + d)*d_E + e).
struct RecoveryChannel {
    std::size_t dim_c = 0;
    std::size_t dim_d = 0;
    std::size_t dim_e = 0;
    CMatrix isometry;

    /// Lambda(sigma) = tr_E U sigma U^dag on C (x) D.
    CMatrix apply(const CMatrix& sigma) const;
    /// (id (x) Lambda)(rho) acting on the last party of rho.
    DensityOp apply_last(const DensityOp& rho) const;
    /// max |U^dag U - I|
    double isometry_defect() const;
};

/// Lambda(s) = rho_CD^{1/2} (rho_C^{-1/2} s rho_C^{-1/2} (x) I_D) rho_CD^{1/2}; the kernel of
/// rho_C is routed to an extra environment level so U stays an isometry.
/// Throws PreconditionError when tr_D rho_CD differs from rho_C by more than 1e-8.
RecoveryChannel petz_channel(const DensityOp& rho_c, const DensityOp& rho_cd, double tol = kTau);

/// || (id (x) Lambda)(rho_BC) - rho_BCD ||_F
double verify_recovery(const DensityOp& rho_bc, const RecoveryChannel& ch, const DensityOp& rho_bcd);

struct Extraction {
    SeparableDecomposition decomposition;  ///< of rho_AB, left = A, right = B
    std::vector<double> branch_weights;    ///< norm^2 of each D branch; equals the input weights
    double entropy_gap = 0.0;              ///< H(rho_C) - H(rho_BC)
    double recovery_deviation = 0.0;
    double rebuild_error = 0.0;            ///< || rebuild - rho_AB ||_F
};

/// Runs the full pipeline on psi (parties A, B, C) with a decomposition of
/// rho_BC. Throws PreconditionError when the decomposition does not rebuild
/// rho_BC or when |H(rho_C) - H(rho_BC)| > 1e-8 (recovery would be inexact).
Extraction extract_separable_ab(const PureState& psi, const SeparableDecomposition& dec_bc, double tol = kTau);

}  // namespace enthier
