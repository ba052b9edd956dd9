#include "doctest.h"
#include "helpers.hpp"

#include "enthier/error.hpp"

#include <cmath>

using namespace enthier;
using namespace testutil;

namespace {

PureState ghz3() {
    const double s = 1.0 / std::sqrt(2.0);
    CVector a(8);
    a[0] = s;
    a[7] = s;
    return PureState({2, 2, 2}, a);
}

// (|000> + |011> + |111>) / sqrt 3
PureState three_term() {
    const double s = 1.0 / std::sqrt(3.0);
    CVector a(8);
    a[0] = s;
    a[3] = s;
    a[7] = s;
    return PureState({2, 2, 2}, a);
}

PureState random_pure_state(const Dims& dims, Rng& rng) {
    return PureState(dims, random_unit_vector(total_dim(dims), rng));
}

}  // namespace

TEST_SUITE("qstate") {

TEST_CASE("reductions of ghz, product and three-term states") {
    const DensityOp ab = reduce(ghz3(), {0, 1});
    CMatrix expect(4, 4);
    expect(0, 0) = 0.5;
    expect(3, 3) = 0.5;
    CHECK(max_diff(ab.matrix(), expect) < 1e-12);

    const PureState prod = PureState::product({basis(2, 0), basis(2, 0), basis(2, 0)});
    CMatrix p00(4, 4);
    p00(0, 0) = 1;
    CHECK(max_diff(reduce(prod, {1, 2}).matrix(), p00) < 1e-12);

    CMatrix bc(4, 4);
    const double t = 1.0 / 3.0;
    bc(0, 0) = t;
    bc(0, 3) = t;
    bc(3, 0) = t;
    bc(3, 3) = 2 * t;
    CHECK(max_diff(reduce(three_term(), {1, 2}).matrix(), bc) < 1e-12);
}

TEST_CASE("reduce rejects empty and full keep sets") {
    CHECK_THROWS_AS(reduce(ghz3(), {}), Error);
    CHECK_THROWS_AS(reduce(ghz3(), {0, 1, 2}), Error);
    CHECK_THROWS_AS(reduce(ghz3(), {0, 0}), Error);
}

TEST_CASE("bell pair reduces to the maximally mixed qubit") {
    const DensityOp a = reduce(bell(), {0});
    CHECK(max_diff(a.matrix(), CMatrix::identity(2) * 0.5) < 1e-12);
}

TEST_CASE("partial transpose spectra and involution") {
    CMatrix sep(4, 4);
    sep(0, 0) = 0.5;
    sep(3, 3) = 0.5;
    const DensityOp s({2, 2}, sep);
    CHECK(max_diff(partial_transpose(s, {1}), sep) < 1e-15);

    const std::vector<double> ev = eigenvalues_hermitian(partial_transpose(DensityOp::from_pure(bell()), {1}));
    CHECK(ev[0] == doctest::Approx(-0.5));
    CHECK(ev[1] == doctest::Approx(0.5));
    CHECK(ev[3] == doctest::Approx(0.5));

    Rng rng = derived_rng(21, 0);
    const DensityOp rho({3, 2}, random_density(6, 6, rng));
    const CMatrix pt = partial_transpose(rho, {1});
    CHECK(is_hermitian(pt));
    CHECK(std::abs(pt.trace() - rho.matrix().trace()) < 1e-12);
    CHECK(max_diff(partial_transpose(DensityOp::trusted({3, 2}, pt), {1}), rho.matrix()) < 1e-12);
}

TEST_CASE("schmidt decomposition of bell, product and ghz") {
    const SchmidtForm b = schmidt(bell(), {0});
    REQUIRE(b.coefficients.size() == 2);
    CHECK(b.coefficients[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(b.coefficients[1] == doctest::Approx(1 / std::sqrt(2.0)));

    const PureState prod = PureState::product({basis(2, 1), basis(3, 2)});
    const SchmidtForm p = schmidt(prod, {0});
    REQUIRE(p.coefficients.size() == 1);
    CHECK(p.coefficients[0] == doctest::Approx(1.0));

    const SchmidtForm g = schmidt(ghz3(), {0});
    REQUIRE(g.coefficients.size() == 2);
    // right basis spans {|00>, |11>}
    for (const CVector& v : g.right_basis) {
        CHECK(std::norm(v[0]) + std::norm(v[3]) == doctest::Approx(1.0));
    }
    CHECK(fidelity_pure(g.reconstruct(), ghz3()) == doctest::Approx(1.0));
}

TEST_CASE("schmidt reconstruction and rank on random states") {
    Rng rng = derived_rng(22, 0);
    for (int t = 0; t < 10; ++t) {
        const PureState psi = random_pure_state({2, 3, 2}, rng);
        const SchmidtForm f = schmidt(psi, {0, 2});
        double s = 0;
        for (double c : f.coefficients) s += c * c;
        CHECK(s == doctest::Approx(1.0));
        CHECK(f.coefficients.size() == 3);
        const PureState back = f.reconstruct();
        double err = 0;
        for (std::size_t i = 0; i < psi.dim(); ++i) err = std::max(err, std::abs(back.amps()[i] - psi.amps()[i]));
        CHECK(err < 1e-8);
        for (std::size_t i = 0; i < f.left_basis.size(); ++i)
            for (std::size_t j = 0; j < f.left_basis.size(); ++j)
                CHECK(std::abs(inner(f.left_basis[i], f.left_basis[j]) - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("purification examples and round trip") {
    CMatrix p0(2, 2);
    p0(0, 0) = 1;
    const PureState pp = purify(DensityOp({2}, p0));
    CHECK(pp.dims() == Dims{2, 1});
    CHECK(std::abs(pp.amps()[0]) == doctest::Approx(1.0));

    const PureState mm = purify(DensityOp({2}, CMatrix::identity(2) * 0.5));
    const SchmidtForm f = schmidt(mm, {0});
    REQUIRE(f.coefficients.size() == 2);
    CHECK(f.coefficients[1] == doctest::Approx(1 / std::sqrt(2.0)));

    Rng rng = derived_rng(23, 0);
    const DensityOp rho({2, 3}, random_density(6, 3, rng));
    const PureState psi = purify(rho);
    CHECK(psi.dims() == Dims{2, 3, 3});
    CHECK(max_diff(reduce(psi, {0, 1}).matrix(), rho.matrix()) < 1e-8);
    CHECK(local_ranks(psi)[2] == 3);
}

TEST_CASE("complementary reductions of pure states share spectra") {
    Rng rng = derived_rng(24, 0);
    for (int t = 0; t < 20; ++t) {
        const PureState psi = random_pure_state({2, 3, 4}, rng);
        CHECK(spectral_distance(spectrum(reduce(psi, {0, 1})), spectrum(reduce(psi, {2}))) < 1e-8);
        CHECK(std::abs(entropy(reduce(psi, {1, 2})) - entropy(reduce(psi, {0}))) < 1e-8);
    }
}

TEST_CASE("entropy and relative entropy") {
    CMatrix p0(2, 2);
    p0(0, 0) = 1;
    CHECK(entropy(DensityOp({2}, p0)) == doctest::Approx(0.0));
    const DensityOp half({2}, CMatrix::identity(2) * 0.5);
    CHECK(entropy(half) == doctest::Approx(1.0));
    const std::vector<double> d{0.75, 0.25};
    const DensityOp sigma({2}, CMatrix::diagonal(d));
    CHECK(rel_entropy(half, sigma) == doctest::Approx(1.0 - 0.5 * std::log2(3.0)).epsilon(1e-12));
    CHECK(std::abs(rel_entropy(sigma, sigma)) < 1e-9);
    CHECK(std::isinf(rel_entropy(half, DensityOp({2}, p0))));

    Rng rng = derived_rng(25, 0);
    for (int t = 0; t < 10; ++t) {
        const DensityOp a({4}, random_density(4, 4, rng));
        const DensityOp b({4}, random_density(4, 4, rng));
        CHECK(rel_entropy(a, b) >= -1e-9);
        const CMatrix u = random_unitary(4, rng);
        const DensityOp ua = DensityOp::trusted({4}, u * a.matrix() * u.adjoint());
        CHECK(std::abs(entropy(ua) - entropy(a)) < 1e-9);
    }
}

TEST_CASE("majorization") {
    const std::vector<double> a{1, 0}, b{0.5, 0.5};
    CHECK(majorizes(a, b));
    CHECK_FALSE(majorizes(b, a));
    const std::vector<double> x{0.5, 0.3, 0.2}, y{0.4, 0.4, 0.2};
    CHECK(majorizes(x, y));
    const std::vector<double> shorter{1.0};
    CHECK(majorizes(shorter, x));
    const std::vector<double> neg{1.5, -0.5};
    CHECK_THROWS_AS(majorizes(neg, b), Error);
}

TEST_CASE("local ranks, permutations and local unitaries") {
    CHECK(local_ranks(ghz3()) == std::vector<std::size_t>{2, 2, 2});
    const std::vector<std::size_t> order{2, 0, 1};
    const PureState t = three_term();
    const PureState p = permute_parties(t, order);
    const std::size_t idx[] = {1, 0, 1};  // new (C, A, B) = (1, 0, 1) is old |011>
    CHECK(std::abs(p.amplitude(idx)) == doctest::Approx(1 / std::sqrt(3.0)));
    const std::vector<std::size_t> inverse{1, 2, 0};
    CHECK(fidelity_pure(permute_parties(p, inverse), t) == doctest::Approx(1.0));
    const std::vector<std::size_t> bad{0, 0, 1};
    CHECK_THROWS_AS(permute_parties(t, bad), Error);

    Rng rng = derived_rng(26, 0);
    const std::vector<CMatrix> us{random_unitary(2, rng), random_unitary(2, rng), random_unitary(2, rng)};
    const PureState rotated = apply_local_unitaries(t, us);
    CHECK(spectral_distance(spectrum(reduce(rotated, {0})), spectrum(reduce(t, {0}))) < 1e-10);
}

TEST_CASE("state validation") {
    CHECK_THROWS_AS(PureState({2}, {1, 0}), Error);
    CHECK_THROWS_AS(PureState({2, 2}, {1, 0, 0}), Error);
    CHECK_THROWS_AS(PureState({2, 2}, {1, 1, 0, 0}), Error);
    CHECK_NOTHROW(PureState({2, 2}, {1, 1, 0, 0}, true));
    CHECK_THROWS_AS(PureState({2, 2}, {0, 0, 0, 0}, true), Error);
    const CMatrix nh{{0.5, 0.1}, {0.0, 0.5}};
    CHECK_THROWS_AS(DensityOp({2}, nh), Error);
    CHECK_THROWS_AS(DensityOp({2}, CMatrix::identity(2)), Error);
    const std::vector<double> neg{1.5, -0.5};
    CHECK_THROWS_AS(DensityOp({2}, CMatrix::diagonal(neg)), Error);
    CHECK_THROWS_AS(DensityOp({3}, CMatrix::identity(2) * 0.5), Error);
}

}
