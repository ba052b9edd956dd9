#include "enthier/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace enthier {

CVector gaussian_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (cplx& z : v) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = cplx(re, im);
    }
    return v;
}

CVector random_unit_vector(std::size_t n, Rng& rng) {
    CVector v = gaussian_vector(n, rng);
    normalize(v);
    return v;
}

CMatrix random_unitary(std::size_t n, Rng& rng) {
    std::vector<CVector> cols;
    cols.reserve(n);
    while (cols.size() < n) {
        CVector v = gaussian_vector(n, rng);
        for (int pass = 0; pass < 2; ++pass)
            for (const CVector& c : cols) {
                const cplx ov = inner(c, v);
                for (std::size_t i = 0; i < n; ++i) v[i] -= ov * c[i];
            }
        if (norm(v) < 1e-8) continue;
        normalize(v);
        cols.push_back(std::move(v));
    }
    CMatrix u(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
    return u;
}

std::vector<double> random_probabilities(std::size_t n, Rng& rng, double min_gap) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (;;) {
        std::vector<double> p(n);
        for (double& x : p) x = 0.05 + uni(rng);
        double s = 0.0;
        for (double x : p) s += x;
        for (double& x : p) x /= s;
        std::sort(p.begin(), p.end(), std::greater<>());
        bool ok = true;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (p[i] - p[i + 1] < min_gap / static_cast<double>(n)) ok = false;
        if (ok) return p;
    }
}

Rng derived_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

}  // namespace enthier
