#include "doctest.h"
#include "helpers.hpp"

#include "enthier/criteria.hpp"
#include "enthier/distill.hpp"
#include "enthier/error.hpp"
#include "enthier/families.hpp"

#include <cmath>

using namespace enthier;
using namespace testutil;

namespace {

// (Phi1 + Phi2)/2 with Phi1 = sum_i |ii>/sqrt3 and Phi2 = sum_i |i,i+1>/sqrt3
DensityOp rank_two_mixture() {
    const double s = 1.0 / std::sqrt(3.0);
    CVector p1(9), p2(9);
    for (std::size_t i = 0; i < 3; ++i) {
        p1[i * 3 + i] = s;
        p2[i * 3 + (i + 1) % 3] = s;
    }
    CMatrix m = CMatrix::outer(p1) + CMatrix::outer(p2);
    m *= 0.5;
    return DensityOp({3, 3}, m);
}

// (|01> + |10>)/sqrt2 as a 4x4 projector
CMatrix bell_01() {
    const double s = 1.0 / std::sqrt(2.0);
    return CMatrix::outer(CVector{0, s, s, 0});
}

}  // namespace

TEST_SUITE("distill") {

TEST_CASE("symmetric three-level state projects onto a bell state") {
    const DensityOp ab = reduce(ddd_psi_r(4).state, {0, 1});
    const auto w = witness_search(ab);
    REQUIRE(w);
    CHECK(w->kind == WitnessKind::projection_2x2);
    CHECK(w->left_pair == std::array<std::size_t, 2>{0, 1});
    CHECK(w->right_pair == std::array<std::size_t, 2>{0, 1});
    CHECK(w->verified);
    CHECK(max_diff(w->projected, bell_01()) < 1e-10);
    CHECK(w->evidence == doctest::Approx(-0.5));
    CHECK(verify_witness(ab, {0}, *w));
}

TEST_CASE("reduction-satisfying pair projects onto an entangled two-qubit block") {
    for (double a : {1.0, 0.5, 2.0}) {
        const DensityOp ab = reduce(dmm_psi_a(a).state, {0, 1});
        const auto w = witness_search(ab);
        REQUIRE(w);
        CHECK(w->kind == WitnessKind::projection_2x2);
        CMatrix expect = CMatrix::outer(CVector{0, 1, 1, 0});
        expect(2, 2) += a * a;
        expect *= 1.0 / (2.0 + a * a);
        CHECK(max_diff(w->projected, expect) < 1e-10);
        CHECK(max_diff(project_2x2(ab, {0, 1}, {0, 1}), expect) < 1e-10);
    }
}

TEST_CASE("rank deficit witness") {
    const DensityOp rho = rank_two_mixture();
    CHECK(numeric_rank(rho.matrix()) == 2);
    const auto w = witness_search(rho);
    REQUIRE(w);
    CHECK(w->kind == WitnessKind::rank_deficit);
    CHECK(w->evidence == doctest::Approx(1.0));
    CHECK(verify_witness(rho, {0}, *w));
}

TEST_CASE("reduction violation and maximally correlated witnesses") {
    const auto b = witness_search(DensityOp::from_pure(bell()));
    REQUIRE(b);
    // a pure entangled state has rank 1 below its local rank 2
    CHECK(b->kind == WitnessKind::rank_deficit);

    const DensityOp w = werner(2, 1.0);  // antisymmetric singlet mixture, full local rank
    const auto r = witness_search(DensityOp({2, 2}, w.matrix() * 0.8 + CMatrix::identity(4) * 0.05));
    REQUIRE(r);
    CHECK(r->kind == WitnessKind::reduction_violation);

    // entangled maximally correlated state of full rank on its support
    CMatrix c{{0.5, 0.2}, {0.2, 0.5}};
    CMatrix m(4, 4);
    m(0, 0) = c(0, 0);
    m(0, 3) = c(0, 1);
    m(3, 0) = c(1, 0);
    m(3, 3) = c(1, 1);
    const auto mc = witness_search(DensityOp({2, 2}, m));
    REQUIRE(mc);
    CHECK(mc->verified);
}

TEST_CASE("replay rejects perturbed or mismatched witnesses") {
    const DensityOp ghz_ab = reduce(ghz(2).state, {0, 1});
    CHECK_FALSE(witness_search(ghz_ab));
    DistillWitness fake;
    fake.kind = WitnessKind::projection_2x2;
    fake.left_pair = {0, 1};
    fake.right_pair = {0, 1};
    CHECK_FALSE(verify_witness(ghz_ab, {0}, fake));

    const DensityOp ab = reduce(ddd_psi_r(4).state, {0, 1});
    DistillWitness w = *witness_search(ab);
    w.right_pair = {2, 3};
    CHECK_FALSE(verify_witness(ab, {0}, w));
    CHECK_THROWS_AS(verify_witness(ghz_ab, {0}, *witness_search(ab)), Error);
}

TEST_CASE("search is deterministic") {
    Rng rng = derived_rng(41, 0);
    for (int t = 0; t < 5; ++t) {
        const DensityOp rho({3, 3}, random_density(9, 5, rng));
        const auto a = witness_search(rho, {0}, WitnessBudget::plus_random_rotations(8, 5));
        const auto b = witness_search(rho, {0}, WitnessBudget::plus_random_rotations(8, 5));
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(a->kind == b->kind);
            CHECK(a->left_pair == b->left_pair);
            CHECK(a->right_pair == b->right_pair);
            CHECK(a->rotation_index == b->rotation_index);
            CHECK(a->evidence == b->evidence);
        }
    }
}

TEST_CASE("werner state with small flip weight has no witness") {
    const DensityOp w = werner(3, 0.45);
    CHECK(check_ppt(w).fails());
    CHECK(check_reduction(w).holds());
    CHECK_FALSE(witness_search(w, {0}, WitnessBudget::plus_random_rotations(64, 1)));
}

TEST_CASE("witnesses never coexist with S or P labels") {
    Rng rng = derived_rng(42, 0);
    CriteriaOptions opts;
    opts.witness_rotations = 4;
    for (int t = 0; t < 60; ++t) {
        const std::size_t k = 1 + static_cast<std::size_t>(t % 9);
        const DensityOp rho({3, 3}, random_density(9, k, rng));
        if (witness_search(rho, {0}, WitnessBudget::plus_random_rotations(4, 0))) {
            const Label l = classify_bipartite(rho, {0}, {}, opts).label;
            CHECK(l != Label::S);
            CHECK(l != Label::P);
        }
    }
}

TEST_CASE("distillable family pairs have basis-pair witnesses") {
    const std::vector<FamilyState> fams{ddd_psi_r(4), ddd_psi_r(5), dmm_psi_a(1.0), mmm_example1(4),
                                        ssm(3, 2, 1)};
    for (const FamilyState& f : fams) {
        for (std::size_t k = 0; k < 3; ++k) {
            const Label l = f.certificate.claimed[k];
            if (l != Label::D && l != Label::M) continue;
            const std::size_t x = k, y = (k + 1) % 3;
            CHECK(witness_search(reduce(f.state, {x, y})));
        }
    }
}

}
