#pragma once

#include "enthier/criteria.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace enthier {

/// Labels of the reduced pairs in the order AB, BC, CA.
using LabelTriple = std::array<Label, 3>;

/// "S_SSM" style name of a triple.
std::string triple_name(const LabelTriple& t);
/// Accepts "S_SSM" or "SSM".
std::optional<LabelTriple> parse_triple(std::string_view s);
/// Smallest permutation image under S<P<N<D<M (the sorted triple).
LabelTriple canonical(const LabelTriple& t);

/// Index of the unordered pair {a, b} in AB, BC, CA order.
std::size_t pair_index(std::size_t a, std::size_t b);

/// Facts about a constructed state that the numerics cannot decide alone.
struct Certificate {
    std::string family;
    std::string params;
    LabelTriple claimed{Label::Indeterminate, Label::Indeterminate, Label::Indeterminate};
    /// Construction-based separability of AB, BC, CA; empty where nothing is claimed.
    std::array<std::optional<bool>, 3> pair_separable{};
    /// Size of a known product-term expansion (tensor rank upper bound).
    std::optional<std::size_t> decomposition_size;
    std::string note;
};

/// Certificate of the direct sum of two certified states.
Certificate combine_certificates(const Certificate& a, const Certificate& b);

/// Certificate after permute_parties(psi, order).
Certificate permute_certificate(const Certificate& c, std::span<const std::size_t> order);

}  // namespace enthier
