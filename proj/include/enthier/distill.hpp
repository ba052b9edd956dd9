#pragma once

#include "enthier/linalg.hpp"
#include "enthier/qstate.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

// One-copy distillability witnesses.
namespace enthier {

enum class WitnessKind { reduction_violation, rank_deficit, projection_2x2, mc_entangled };

std::string_view to_string(WitnessKind k) noexcept;

struct DistillWitness {
    WitnessKind kind = WitnessKind::reduction_violation;
    /// reduction / projection: min eigenvalue; rank_deficit: max local rank - rank;
    /// mc_entangled: largest off-diagonal coefficient.
    double evidence = 0.0;
    std::array<std::size_t, 2> left_pair{};   ///< projection_2x2: basis indices on the left side
    std::array<std::size_t, 2> right_pair{};  ///< projection_2x2: basis indices on the right side
    bool rotated = false;                     ///< projection taken in a random local basis
    std::uint64_t seed = 0;
    std::size_t rotation_index = 0;
    CMatrix projected;  ///< normalized 4x4 two-qubit state (projection_2x2)
    std::array<std::size_t, 2> dims{};  ///< left/right dims of the state searched; zero skips the check
    bool verified = false;
};

struct WitnessBudget {
    std::size_t random_rotations = 0;
    std::uint64_t seed = 0;

    static WitnessBudget basis_pairs_only() { return {}; }
    static WitnessBudget plus_random_rotations(std::size_t r = 64, std::uint64_t seed = 0) { return {r, seed}; }
};

/// Tries, in order: rank deficit, reduction violation, entangled maximally
/// correlated form, then every 2x2 computational-basis projection (smallest
/// index pair first), then the same projections under seeded random local
/// rotations. The returned witness has been re-verified.
std::optional<DistillWitness> witness_search(const DensityOp& rho, const PartySet& left = {0},
                                             const WitnessBudget& budget = {}, double tol = kTau);

/// Recomputes the witness condition from scratch. Throws on dimension mismatch.
bool verify_witness(const DensityOp& rho, const PartySet& left, const DistillWitness& w, double tol = kTau);

/// Normalized two-qubit block of rho on span{l0,l1} x span{r0,r1}; empty when
/// the projection has trace below 1e-9. `rho` must be bipartite.
CMatrix project_2x2(const DensityOp& rho, std::array<std::size_t, 2> left_pair, std::array<std::size_t, 2> right_pair);

}  // namespace enthier
