#pragma once

#include "enthier/distill.hpp"
#include "enthier/linalg.hpp"
#include "enthier/qstate.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Bipartite entanglement criteria and the five-level class mapping.
//
// Criteria ids follow the usual hierarchy: (1) separable, (2) PPT,
// (3) non-distillable, (4) reduction, (5) majorization, (6) conditional
// entropy, plus the equality forms (5') equal spectra and (6') equal entropy.
// Every bipartite function takes the left party group of the cut; the rest of
// the parties form the right side.
namespace enthier {

enum class Status { holds, fails, unknown };

enum class Criterion {
    separability,
    ppt,
    non_distillability,
    reduction,
    majorization,
    conditional_entropy,
};

std::string_view to_string(Status s) noexcept;
std::string_view to_string(Criterion c) noexcept;

struct Evidence {
    std::string kind;  ///< e.g. "min_eigenvalue", "entropy_gap", "rank"
    double value = 0.0;
    std::string note;
};

struct Verdict {
    Criterion criterion = Criterion::separability;
    Status status = Status::unknown;
    Evidence evidence;
    std::string rule;  ///< which decision rule produced the status (separability only)
    bool certificate_based = false;

    bool holds() const noexcept { return status == Status::holds; }
    bool fails() const noexcept { return status == Status::fails; }
};

/// Ordered S < P < N < D < M; Indeterminate is outside the order.
enum class Label { S, P, N_candidate, D, M, Indeterminate };

std::string_view to_string(Label l) noexcept;
/// Single letter used in subset names (N_candidate -> 'N', Indeterminate -> '?').
char letter(Label l) noexcept;
std::optional<Label> label_from_letter(char c) noexcept;
/// Componentwise max under S<P<N<D<M; Indeterminate absorbs.
Label max_label(Label a, Label b) noexcept;

struct BipartiteClass {
    Label label = Label::Indeterminate;
    std::vector<Verdict> justification;
    std::optional<DistillWitness> witness;

    const Verdict* find(Criterion c) const noexcept;
};

/// Σ_ij c_ij |b_i c_i><b_j c_j| with orthonormal local bases.
struct MCForm {
    std::vector<CVector> left_basis;
    std::vector<CVector> right_basis;
    CMatrix coefficients;

    CMatrix reconstruct() const;
    /// Largest off-diagonal magnitude of the coefficient matrix.
    double off_diagonal() const;
};

struct MCDetection {
    std::optional<MCForm> form;
    bool degenerate = false;  ///< pairing was ambiguous; absence is not a proof of non-MC
    double residual = 0.0;    ///< reconstruction error of the best candidate
};

/// Context a caller can supply to widen the decidable cases of separability.
struct NeighbourHint {
    bool neighbour_ppt = false;  ///< a pair sharing one party with the focus is PPT
    bool entropy_equal = false;  ///< H(rho_x) == H(rho_xy) for the focus party x not shared
    std::string label;
};

struct SeparabilityContext {
    std::vector<NeighbourHint> hints;
    std::optional<bool> certified_separable;
    std::string certificate_note;
};

struct SpectralVerdicts {
    Verdict majorization;
    Verdict conditional_entropy;
    bool spectra_equal_left = false;   ///< (5') for the left party: rho_L ~ rho_LR
    bool spectra_equal_right = false;
    bool entropy_equal_left = false;   ///< (6') for the left party: H(rho_L) == H(rho_LR)
    bool entropy_equal_right = false;
    double entropy_gap_left = 0.0;     ///< H(rho_LR) - H(rho_L)
    double entropy_gap_right = 0.0;
};

struct CriteriaOptions {
    double tol = kTau;
    double spectral_tol = 1e-8;
    double entropy_tol = 1e-8;
    std::size_t witness_rotations = 64;
    std::uint64_t seed = 0;
};

Verdict check_ppt(const DensityOp& rho, const PartySet& left = {0}, double tol = kTau);
Verdict check_reduction(const DensityOp& rho, const PartySet& left = {0}, double tol = kTau);
SpectralVerdicts check_spectral(const DensityOp& rho, const PartySet& left = {0},
                                const CriteriaOptions& opts = {});

MCDetection detect_max_correlated(const DensityOp& rho, const PartySet& left = {0}, double tol = kTau);

/// Decides separability where a rule applies, in fixed order:
/// (a) NPT; (c) rank <= max local rank and PPT; (b) 2x2 / 2x3 PPT;
/// (c') direct-sum blocks in the computational basis, each decided by (b), (c) or (d);
/// (d) maximally correlated; (e) neighbour hints; (f) certificate.
Verdict decide_separable(const DensityOp& rho, const PartySet& left = {0}, const SeparabilityContext& ctx = {},
                         double tol = kTau);

BipartiteClass classify_bipartite(const DensityOp& rho, const PartySet& left = {0},
                                  const SeparabilityContext& ctx = {}, const CriteriaOptions& opts = {});

/// No verdict pattern violates (1) => (2) => (4) => (5) => (6); unknowns are exempt.
bool hierarchy_consistent(const std::vector<Verdict>& verdicts);

/// True iff the label is consistent with the verdicts attached to it.
bool label_consistent(const BipartiteClass& cls);

struct InferenceRecord {
    bool applicable = false;
    std::string reason;
    std::array<std::size_t, 2> focus{};
    std::size_t anchor = 0;
    Verdict separability;
    Verdict ppt;
    Verdict reduction;
    bool spectra_equal = false;  ///< (5')
    bool entropy_equal = false;  ///< (6')
    bool consistent = false;     ///< all decided conditions agree
};

/// Equivalence check for the focus pair (x, y) of a tripartite pure state with
/// anchor z. Applicable when rho_yz is PPT, or when some party has a qubit
/// reduced state and rho_yz satisfies the reduction criterion. (5') and (6')
/// compare rho_x with rho_xy.
InferenceRecord theorem2_infer(const PureState& psi, std::array<std::size_t, 2> focus, std::size_t anchor,
                               const CriteriaOptions& opts = {});

}  // namespace enthier
