#pragma once

#include "enthier/certificate.hpp"
#include "enthier/criteria.hpp"
#include "enthier/qstate.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Tripartite classification, tensor-rank bounds and the direct-sum monoid.
namespace enthier {

/// Party pairs in label order: AB, BC, CA.
inline constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{0, 1}, {1, 2}, {2, 0}}};

struct TripleClass {
    std::array<BipartiteClass, 3> pairs;

    LabelTriple raw() const;
    LabelTriple canonical() const;
    std::string name() const;
    /// No Indeterminate or N_candidate component.
    bool decisive() const;
    bool certificate_used() const;
};

struct ClassifyOptions {
    CriteriaOptions criteria;
    const Certificate* certificate = nullptr;
};

TripleClass classify_tripartite(const PureState& psi, const ClassifyOptions& opts = {});

struct RankBounds {
    std::size_t lower = 1;
    std::size_t upper = 1;
    std::string lower_method;
    std::string upper_method;
};

/// Lower bound: largest local rank, raised past max(d_x, d_y) for every pair
/// certified NPT with reduction holding. Upper bound: the smallest of the known
/// decomposition, the product of the two smallest local ranks and the
/// single-party slice expansion.
RankBounds tensor_rank_bounds(const PureState& psi, std::optional<std::size_t> known_decomposition = std::nullopt,
                              const TripleClass* cls = nullptr, double tol = kTau);

struct ConstraintCheck {
    std::string relation;
    bool pass = false;
};

struct TableReport {
    bool essential = false;      ///< one of the nine essential subsets up to permutation
    bool contradiction = false;  ///< outside the nine subsets
    std::string row;             ///< matched row name, e.g. "S_SSM"
    std::array<std::size_t, 3> relabel{0, 1, 2};  ///< row party k is state party relabel[k]
    std::vector<ConstraintCheck> checks;
    bool pass = false;
};

TableReport check_table_constraints(const LabelTriple& t, const RankBounds& b, std::array<std::size_t, 3> ranks);

/// Names of the nine essential subsets in canonical (sorted) form.
const std::vector<LabelTriple>& essential_subsets();

/// Non-distillable pairs only occur in the S/M patterns allowed for them.
bool pair_pattern_consistent(const LabelTriple& t);
/// A P/N pair next to entangled neighbours forces M on both; a D pair forces D or M.
bool monogamy_consistent(const LabelTriple& t);

/// w1 psi1 (+) w2 psi2 with every local space the direct sum of the factors'.
PureState monoid_product(const PureState& a, const PureState& b, double w1 = 0.70710678118654752440,
                         double w2 = 0.70710678118654752440);

/// Componentwise max; S_SSS is the unit.
LabelTriple predict_product_class(const LabelTriple& a, const LabelTriple& b);

struct ConjectureCheck {
    bool filter_pass = false;      ///< rho_BC satisfies reduction and rho_AB majorization
    bool reduction_holds = false;  ///< rho_AB satisfies reduction
};

ConjectureCheck conjecture_check(const PureState& psi, const CriteriaOptions& opts = {});

struct ConjectureReport {
    std::size_t trials = 0;
    std::size_t filter_hits = 0;
    std::size_t reduction_holds = 0;
    std::vector<PureState> counterexamples;
    std::vector<std::size_t> counterexample_trials;
};

/// Random 3x3x3 states; throws when trials == 0. Never asserts the outcome.
ConjectureReport conjecture_scan(std::size_t trials, std::uint64_t seed, const CriteriaOptions& opts = {});

/// Random pure state with complex Gaussian amplitudes.
PureState random_pure(const Dims& dims, std::uint64_t seed, std::uint64_t stream);

}  // namespace enthier
