#pragma once

#include "enthier/linalg.hpp"
#include "enthier/qstate.hpp"
#include "enthier/random.hpp"

#include <cmath>

// Small shared builders for the unit tests.
namespace testutil {

using namespace enthier;

inline double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).max_abs(); }

inline CVector basis(std::size_t d, std::size_t i) {
    CVector v(d);
    v[i] = 1.0;
    return v;
}

inline PureState bell() {
    const double s = 1.0 / std::sqrt(2.0);
    return PureState({2, 2}, {s, 0, 0, s});
}

/// G G^dag / tr with G of shape dim x k.
inline CMatrix random_density(std::size_t dim, std::size_t k, Rng& rng) {
    CMatrix g(dim, k, gaussian_vector(dim * k, rng));
    CMatrix m = g * g.adjoint();
    m *= 1.0 / m.trace().real();
    return m;
}

inline CMatrix random_hermitian(std::size_t n, Rng& rng) {
    CMatrix g(n, n, gaussian_vector(n * n, rng));
    CMatrix h = g + g.adjoint();
    h *= 0.5;
    return h;
}

/// (I - beta F) / (d^2 - beta d) on C^d (x) C^d.
inline DensityOp werner(std::size_t d, double beta) {
    CMatrix m = CMatrix::identity(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i * d + j, j * d + i) -= beta;
    m *= 1.0 / (static_cast<double>(d * d) - beta * static_cast<double>(d));
    return DensityOp({d, d}, m);
}

}  // namespace testutil
