#pragma once

#include "enthier/linalg.hpp"

#include <cstdint>
#include <random>

namespace enthier {

using Rng = std::mt19937_64;

/// Complex vector with i.i.d. standard complex normal entries (rotation invariant).
CVector gaussian_vector(std::size_t n, Rng& rng);

/// Uniformly random unit vector.
CVector random_unit_vector(std::size_t n, Rng& rng);

/// Haar-random unitary (Gram-Schmidt on a complex Ginibre matrix, columns orthonormal).
CMatrix random_unitary(std::size_t n, Rng& rng);

/// Probability vector with entries bounded away from zero and from each other
/// (spacing at least `min_gap`); sorted descending.
std::vector<double> random_probabilities(std::size_t n, Rng& rng, double min_gap = 0.02);

/// Independent stream derived from a base seed and a stream index.
Rng derived_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace enthier
