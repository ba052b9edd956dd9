#pragma once

#include "enthier/criteria.hpp"
#include "enthier/qstate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// N-party checks: PPT across every bipartition, full separability on the
// decidable subclasses, and detection of the generalized GHZ form
//   sum_i sqrt(p_i) |i>^{(x) n} |b_{i,n}> ... |b_{i,N-1}>   (up to LU).
namespace enthier {

struct Bipartition {
    PartySet left;  ///< always contains party 0
    PartySet right;
};

/// All 2^(m-1) - 1 nontrivial cuts of m parties; m <= 10.
std::vector<Bipartition> bipartitions(std::size_t m);

struct BipartitionReport {
    std::vector<Bipartition> cuts;
    std::vector<Verdict> verdicts;  ///< PPT verdict per cut, same order
    Status overall = Status::holds;
};

/// A single-party operator has no cut and reports overall Holds.
BipartitionReport check_all_bipartitions_ppt(const DensityOp& rho, double tol = kTau);

struct GhzForm {
    std::size_t n = 0;
    std::vector<double> p;  ///< branch weights, descending
    /// basis[j][i]: branch-i vector on party j. Parties below n are orthonormal
    /// across branches; later parties are arbitrary unit vectors.
    std::vector<std::vector<CVector>> basis;
    std::vector<cplx> phases;  ///< branch phases absorbed by the reconstruction
    double residual = 0.0;

    PureState reconstruct() const;
};

struct GhzDetection {
    std::optional<GhzForm> form;
    bool degenerate = false;  ///< equal weights left the shared basis ambiguous
    double residual = 0.0;    ///< best reconstruction error seen
};

GhzDetection detect_generalized_ghz(const PureState& psi, std::size_t n, double tol = kTau, std::uint64_t seed = 0);

struct Theorem11Report {
    std::size_t n = 0;
    std::string statement1 = "implied by (2)";
    std::vector<BipartitionReport> reduced_ppt;  ///< one per traced-out party i < n
    Status statement2 = Status::unknown;
    Status statement3 = Status::unknown;
    std::string statement3_rule;
    bool statement4 = false;
    GhzDetection detection;
    bool consistent = false;
};

/// Evaluates (2) all-bipartition PPT of every rho_{not i}, i < n; (3) full
/// separability of those reductions where decidable; (4) the GHZ form.
Theorem11Report theorem11_verify(const PureState& psi, std::size_t n, double tol = kTau, std::uint64_t seed = 0);

/// W state on N qubits.
PureState w_state(std::size_t parties);

}  // namespace enthier
