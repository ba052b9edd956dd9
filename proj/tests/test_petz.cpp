#include "doctest.h"
#include "helpers.hpp"

#include "enthier/error.hpp"
#include "enthier/families.hpp"
#include "enthier/petz.hpp"
#include "enthier/suites.hpp"

#include <cmath>

using namespace enthier;
using namespace testutil;

namespace {

SeparableDecomposition random_decomposition(std::size_t terms, std::size_t db, std::size_t dc, Rng& rng) {
    SeparableDecomposition d;
    d.dims = {db, dc};
    d.weights = random_probabilities(terms, rng);
    for (std::size_t i = 0; i < terms; ++i) {
        d.left.push_back(random_unit_vector(db, rng));
        d.right.push_back(random_unit_vector(dc, rng));
    }
    return d;
}

}  // namespace

TEST_SUITE("petz") {

TEST_CASE("extension of the ghz pair") {
    const DensityOp bc = reduce(ghz(2).state, {1, 2});
    const SeparableDecomposition dec = cq_decomposition(bc, 1);
    CHECK(dec.size() == 2);
    const DensityOp ext = build_extension(dec);
    CHECK(ext.dims() == Dims{2, 2, 2});
    CMatrix expect(8, 8);
    // the term order of the decomposition decides which D level each branch takes
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t b = std::abs(dec.left[i][0]) > 0.5 ? 0 : 1;
        expect((b * 2 + b) * 2 + i, (b * 2 + b) * 2 + i) = 0.5;
    }
    CHECK(max_diff(ext.matrix(), expect) < 1e-12);
    CHECK(max_diff(partial_trace(ext, {0, 1}).matrix(), bc.matrix()) < 1e-12);
}

TEST_CASE("single-term and random extensions trace back") {
    Rng rng = derived_rng(71, 0);
    const SeparableDecomposition one = random_decomposition(1, 2, 3, rng);
    const DensityOp e1 = build_extension(one);
    CHECK(numeric_rank(e1.matrix()) == 1);
    const SeparableDecomposition three = random_decomposition(3, 2, 3, rng);
    const DensityOp e3 = build_extension(three);
    CHECK(max_diff(partial_trace(e3, {0, 1}).matrix(), three.rebuild()) < 1e-9);

    SeparableDecomposition bad = three;
    bad.weights[0] += 0.1;
    CHECK_THROWS_AS(build_extension(bad), Error);
    bad = three;
    bad.right.pop_back();
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("recovery channel reference cases") {
    Rng rng = derived_rng(72, 0);
    const DensityOp rc({3}, random_density(3, 3, rng));
    const DensityOp rcd({3, 1}, rc.matrix());
    const RecoveryChannel id = petz_channel(rc, rcd);
    CHECK(id.isometry_defect() < 1e-9);
    const CMatrix s = random_density(3, 2, rng);
    CHECK(max_diff(id.apply(s), s) < 1e-9);

    // ghz: C is maximally mixed, CD is classically correlated
    CMatrix cd(4, 4);
    cd(0, 0) = 0.5;
    cd(3, 3) = 0.5;
    const RecoveryChannel g = petz_channel(DensityOp({2}, CMatrix::identity(2) * 0.5), DensityOp({2, 2}, cd));
    CHECK(max_diff(g.apply(CMatrix::identity(2) * 0.5), cd) < 1e-9);

    // classical copy: |i><i| -> |i,i><i,i|
    const std::vector<double> p{0.5, 0.3, 0.2};
    CMatrix ccd(9, 9);
    for (std::size_t i = 0; i < 3; ++i) ccd(i * 4, i * 4) = p[i];
    const RecoveryChannel cp = petz_channel(DensityOp({3}, CMatrix::diagonal(p)), DensityOp({3, 3}, ccd));
    for (std::size_t i = 0; i < 3; ++i) {
        CMatrix out(9, 9);
        out(i * 4, i * 4) = 1;
        CHECK(max_diff(cp.apply(CMatrix::outer(basis(3, i))), out) < 1e-9);
    }
    CHECK(cp.isometry_defect() < 1e-9);
}

TEST_CASE("channel is trace preserving with a positive choi operator") {
    Rng rng = derived_rng(73, 0);
    const SeparableDecomposition dec = random_decomposition(3, 2, 3, rng);
    const DensityOp ext = build_extension(dec);
    const DensityOp rcd = partial_trace(ext, {1, 2});
    const DensityOp rc = partial_trace(ext, {1});
    const RecoveryChannel ch = petz_channel(rc, rcd);
    CHECK(ch.isometry_defect() < 1e-9);
    CHECK(max_diff(ch.apply(rc.matrix()), rcd.matrix()) < 1e-8);
    CMatrix choi(3 * 9, 3 * 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const CMatrix out = ch.apply(CMatrix::outer(basis(3, i), basis(3, j)));
            CHECK(std::abs(out.trace() - (i == j ? 1.0 : 0.0)) < 1e-8);
            for (std::size_t a = 0; a < 9; ++a)
                for (std::size_t b = 0; b < 9; ++b) choi(i * 9 + a, j * 9 + b) = out(a, b);
        }
    CHECK(is_psd(choi).psd);
}

TEST_CASE("support mismatch is rejected") {
    const DensityOp rc({2}, CMatrix::identity(2) * 0.5);
    CMatrix cd(4, 4);
    cd(0, 0) = 1.0;
    CHECK_THROWS_AS(petz_channel(rc, DensityOp({2, 2}, cd)), PreconditionError);
}

TEST_CASE("ghz pipeline") {
    const PureState g = ghz(2).state;
    const SeparableDecomposition dec = cq_decomposition(reduce(g, {1, 2}), 1);
    const Extraction ex = extract_separable_ab(g, dec);
    CHECK(ex.recovery_deviation <= 1e-9);
    CHECK(ex.rebuild_error <= 1e-9);
    CHECK(ex.decomposition.size() == 2);
    for (std::size_t i = 0; i < ex.decomposition.size(); ++i) {
        CHECK(ex.decomposition.weights[i] == doctest::Approx(0.5));
        // classical terms: A and B vectors are matching computational basis states
        const CVector& a = ex.decomposition.left[i];
        const CVector& b = ex.decomposition.right[i];
        CHECK(std::abs(std::abs(a[0]) - std::abs(b[0])) < 1e-9);
        CHECK(std::abs(std::abs(a[0]) * std::abs(a[1])) < 1e-9);
    }
}

TEST_CASE("random forms rebuild exactly and keep their weights") {
    const std::vector<std::size_t> roles{2, 0, 1};
    for (std::uint64_t t = 0; t < 15; ++t) {
        const PureState psi = permute_parties(random_lemma2(3, t).state, roles);
        const SeparableDecomposition dec = cq_decomposition(reduce(psi, {1, 2}), 1);
        const Extraction ex = extract_separable_ab(psi, dec);
        CHECK(ex.recovery_deviation <= 1e-8);
        CHECK(ex.rebuild_error <= 1e-7);
        CHECK(std::abs(ex.entropy_gap) <= 1e-8);
        REQUIRE(ex.branch_weights.size() == dec.size());
        for (std::size_t i = 0; i < dec.size(); ++i) CHECK(std::abs(ex.branch_weights[i] - dec.weights[i]) < 1e-8);
        CHECK_NOTHROW(ex.decomposition.validate());
        CHECK(max_diff(ex.decomposition.rebuild(), reduce(psi, {0, 1}).matrix()) < 1e-7);
    }
}

TEST_CASE("counterexample is refused and recovery is inexact") {
    const std::vector<std::size_t> swap{2, 1, 0};
    const PureState c = permute_parties(counterexample_232().state, swap);
    const SeparableDecomposition dec = cq_decomposition(reduce(c, {1, 2}), 0);
    const double gap = entropy(reduce(c, {2})) - entropy(reduce(c, {1, 2}));
    CHECK(std::abs(gap) > 0.1);
    CHECK_THROWS_AS(extract_separable_ab(c, dec), PreconditionError);
    const DensityOp ext = build_extension(dec);
    const RecoveryChannel ch = petz_channel(reduce(c, {2}), partial_trace(ext, {1, 2}));
    CHECK(ch.isometry_defect() < 1e-9);
    CHECK(verify_recovery(reduce(c, {1, 2}), ch, ext) > 1e-3);
}

TEST_CASE("decomposition errors") {
    const DensityOp bell_rho = DensityOp::from_pure(bell());
    CHECK_THROWS_AS(cq_decomposition(bell_rho, 0), PreconditionError);
    const PureState g = ghz(2).state;
    SeparableDecomposition wrong;
    wrong.dims = {2, 2};
    wrong.weights = {1.0};
    wrong.left = {basis(2, 0)};
    wrong.right = {basis(2, 0)};
    CHECK_THROWS_AS(extract_separable_ab(g, wrong), PreconditionError);
}

}
