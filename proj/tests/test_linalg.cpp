#include "doctest.h"
#include "helpers.hpp"

#include "enthier/error.hpp"

#include <algorithm>

#include <cmath>

using namespace enthier;
using namespace testutil;

TEST_SUITE("linalg") {

TEST_CASE("pauli matrices have eigenvalues -1 and 1") {
    const CMatrix x{{0, 1}, {1, 0}};
    const CMatrix y{{0, cplx(0, -1)}, {cplx(0, 1), 0}};
    const CMatrix z{{1, 0}, {0, -1}};
    for (const CMatrix* p : {&x, &y, &z}) {
        const std::vector<double> ev = eigenvalues_hermitian(*p);
        REQUIRE(ev.size() == 2);
        CHECK(ev[0] == doctest::Approx(-1.0));
        CHECK(ev[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("eigenvalues of a 2x2 hermitian match the closed form") {
    const CMatrix h{{2.0, cplx(1, 1)}, {cplx(1, -1), -1.0}};
    // (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2)
    const double mid = 0.5, rad = std::sqrt(2.25 + 2.0);
    const std::vector<double> ev = eigenvalues_hermitian(h);
    CHECK(ev[0] == doctest::Approx(mid - rad));
    CHECK(ev[1] == doctest::Approx(mid + rad));
}

TEST_CASE("random hermitian matrices are reconstructed from their eigensystem") {
    Rng rng = derived_rng(3, 0);
    for (std::size_t n : {1u, 2u, 5u, 9u, 16u}) {
        const CMatrix h = random_hermitian(n, rng);
        const EigenSystem es = eig_hermitian(h);
        for (std::size_t i = 1; i < n; ++i) CHECK(es.values[i - 1] <= es.values[i]);
        CHECK(max_diff(es.vectors.adjoint() * es.vectors, CMatrix::identity(n)) < 1e-10);
        const CMatrix rebuilt = es.vectors * CMatrix::diagonal(es.values) * es.vectors.adjoint();
        CHECK(max_diff(rebuilt, h) < 1e-10);
    }
}

TEST_CASE("degenerate spectra still give an orthonormal eigenbasis") {
    const std::vector<double> d{1, 1, 1, 0};
    Rng rng = derived_rng(4, 0);
    const CMatrix u = random_unitary(4, rng);
    const CMatrix h = u * CMatrix::diagonal(d) * u.adjoint();
    const EigenSystem es = eig_hermitian(h);
    CHECK(max_diff(es.vectors.adjoint() * es.vectors, CMatrix::identity(4)) < 1e-10);
    CHECK(es.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.values[3] == doctest::Approx(1.0));
}

TEST_CASE("non-hermitian input is rejected") {
    const CMatrix m{{0, 1}, {0, 0}};
    CHECK_THROWS_AS(eig_hermitian(m), Error);
    CHECK_THROWS_AS(eig_hermitian(CMatrix(2, 3)), Error);
}

TEST_CASE("kron follows the left-slow index convention") {
    const CMatrix a{{1, 2}, {3, 4}};
    const CMatrix b{{0, 1}, {1, 0}};
    const CMatrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    CHECK(k(0, 1) == cplx(1));
    CHECK(k(0, 3) == cplx(2));
    CHECK(k(3, 2) == cplx(4));
    CHECK(k(2, 1) == cplx(3));
    const CVector v = kron(basis(2, 1), basis(3, 2));
    CHECK(v.size() == 6);
    CHECK(v[5] == cplx(1));
}

TEST_CASE("psd check and numeric rank") {
    const std::vector<double> d{0.5, 0.5, 0.0, -1e-12};
    const CMatrix h = CMatrix::diagonal(d);
    CHECK(is_psd(h).psd);
    CHECK(numeric_rank(h) == 2);
    const std::vector<double> neg{1.0, -1e-3};
    const PsdCheck c = is_psd(CMatrix::diagonal(neg));
    CHECK_FALSE(c.psd);
    CHECK(c.min_eigenvalue == doctest::Approx(-1e-3));
    const std::vector<double> ev{1e-12, 0.3, 1.0};
    CHECK(numeric_rank(std::span<const double>(ev)) == 2);
}

TEST_CASE("function on support squares back to the input") {
    Rng rng = derived_rng(5, 0);
    const CMatrix rho = random_density(6, 3, rng);
    const CMatrix s = fn_on_support(rho, [](double x) { return std::sqrt(x); });
    CHECK(max_diff(s * s, rho) < 1e-10);
    const CMatrix inv = fn_on_support(rho, [](double x) { return 1.0 / x; });
    // rho * rho^+ is the projector onto the support
    const CMatrix p = rho * inv;
    CHECK(max_diff(p * p, p) < 1e-8);
    CHECK(std::abs(p.trace().real() - 3.0) < 1e-8);
    const std::vector<double> neg{1.0, -0.5};
    CHECK_THROWS_AS(fn_on_support(CMatrix::diagonal(neg), [](double x) { return x; }), Error);
}

TEST_CASE("direct sum and compose") {
    const CMatrix a{{1, 2}, {3, 4}};
    const CMatrix b{{5}};
    const CMatrix s = direct_sum(a, b);
    REQUIRE(s.rows() == 3);
    CHECK(s(1, 1) == cplx(4));
    CHECK(s(2, 2) == cplx(5));
    CHECK(s(0, 2) == cplx(0));
    CHECK(max_diff(compose(a, b, ComposeMode::direct_sum), s) == 0.0);
    CHECK(max_diff(compose(a, b, ComposeMode::tensor), kron(a, b)) == 0.0);
}

TEST_CASE("small reference cases") {
    const EigenSystem id = eig_hermitian(CMatrix::identity(2));
    CHECK(id.values == std::vector<double>{1.0, 1.0});
    CHECK(max_diff(id.vectors.adjoint() * id.vectors, CMatrix::identity(2)) < 1e-12);

    const std::vector<double> d312{3, 1, 2};
    const EigenSystem es = eig_hermitian(CMatrix::diagonal(d312));
    CHECK(es.values[0] == doctest::Approx(1.0));
    CHECK(es.values[1] == doctest::Approx(2.0));
    CHECK(es.values[2] == doctest::Approx(3.0));
    CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors(0, 2)) == doctest::Approx(1.0));

    const PsdCheck i2 = is_psd(CMatrix::identity(2));
    CHECK(i2.psd);
    CHECK(i2.min_eigenvalue == doctest::Approx(1.0));
    const std::vector<double> dn{1, -0.5};
    const PsdCheck n = is_psd(CMatrix::diagonal(dn));
    CHECK_FALSE(n.psd);
    CHECK(n.min_eigenvalue == doctest::Approx(-0.5));

    const std::vector<double> d40{4, 0};
    const std::vector<double> d20{2, 0};
    CHECK(max_diff(fn_on_support(CMatrix::diagonal(d40), [](double x) { return std::sqrt(x); }),
                   CMatrix::diagonal(d20)) < 1e-12);
    const std::vector<double> d410{4, 1, 0};
    const std::vector<double> dinv{0.5, 1, 0};
    CHECK(max_diff(fn_on_support(CMatrix::diagonal(d410), [](double x) { return 1.0 / std::sqrt(x); }),
                   CMatrix::diagonal(dinv)) < 1e-12);

    CHECK(max_diff(compose(CMatrix::identity(2), CMatrix::identity(3), ComposeMode::tensor),
                   CMatrix::identity(6)) == 0.0);
    const std::vector<double> one{1}, two{2}, onetwo{1, 2};
    CHECK(max_diff(direct_sum(CMatrix::diagonal(one), CMatrix::diagonal(two)), CMatrix::diagonal(onetwo)) == 0.0);
    const CMatrix p0{{1, 0}, {0, 0}};
    const CMatrix x{{0, 1}, {1, 0}};
    const CMatrix k = kron(p0, x);
    CHECK(k(0, 1) == cplx(1));
    CHECK(k(1, 0) == cplx(1));
    CHECK(k.max_abs() == 1.0);
    CHECK(std::abs(k.trace()) == 0.0);
    CHECK((k(2, 3) == cplx(0) && k(3, 2) == cplx(0)));
}

TEST_CASE("partial transpose of the bell projector has eigenvalue -1/2") {
    const DensityOp rho = DensityOp::from_pure(bell());
    const PsdCheck c = is_psd(partial_transpose(rho, {1}));
    CHECK_FALSE(c.psd);
    CHECK(c.min_eigenvalue == doctest::Approx(-0.5));
}

TEST_CASE("eigenvalue sum equals trace and spectrum is unitarily invariant") {
    Rng rng = derived_rng(6, 0);
    for (int t = 0; t < 20; ++t) {
        const CMatrix h = random_hermitian(7, rng);
        const std::vector<double> ev = eigenvalues_hermitian(h);
        double sum = 0;
        for (double v : ev) sum += v;
        CHECK(std::abs(sum - h.trace().real()) < 1e-9 * std::max(1.0, std::abs(sum)));
        const CMatrix u = random_unitary(7, rng);
        const std::vector<double> ev2 = eigenvalues_hermitian(u * h * u.adjoint());
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - ev2[i]) < 1e-9);
        const CMatrix b = random_hermitian(3, rng);
        CHECK(std::abs(kron(h, b).trace() - h.trace() * b.trace()) < 1e-10);
        const double m = ev.front();
        if (m < 0) {
            const double t1 = -m * 0.5;
            CHECK(is_psd(h, t1).psd <= is_psd(h, t1 * 4).psd);
        }
    }
}

TEST_CASE("identity on support is an idempotent projection for rank-deficient states") {
    Rng rng = derived_rng(7, 0);
    const CMatrix rho = random_density(5, 2, rng);
    const CMatrix s = fn_on_support(rho, [](double) { return 1.0; });
    CHECK(max_diff(s * s, s) < 1e-9);
    CHECK(max_diff(s * rho, rho) < 1e-9);
    CHECK(max_diff(fn_on_support(rho, [](double x) { return x; }), rho) < 1e-10);
}

TEST_CASE("vector helpers") {
    CVector x{{3, 0}, {0, 4}};
    CHECK(norm(x) == doctest::Approx(5.0));
    CHECK(inner(x, x) == cplx(25, 0));
    normalize(x);
    CHECK(norm(x) == doctest::Approx(1.0));
    const CMatrix o = CMatrix::outer(x);
    CHECK(o.trace().real() == doctest::Approx(1.0));
    CHECK(is_hermitian(o));
}

}
