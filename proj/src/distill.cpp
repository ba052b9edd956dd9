#include "enthier/distill.hpp"

#include "enthier/criteria.hpp"
#include "enthier/error.hpp"
#include "enthier/random.hpp"

#include <algorithm>

namespace enthier {

std::string_view to_string(WitnessKind k) noexcept {
    switch (k) {
        case WitnessKind::reduction_violation: return "reduction_violation";
        case WitnessKind::rank_deficit: return "rank_deficit";
        case WitnessKind::projection_2x2: return "projection_2x2";
        case WitnessKind::mc_entangled: return "mc_entangled";
    }
    return "?";
}

namespace {

DensityOp as_bipartite(const DensityOp& rho, const PartySet& left) {
    if (rho.parties() == 2 && left.size() == 1 && left[0] == 0) return rho;
    return regroup(rho, left);
}

CMatrix block_2x2(const DensityOp& rho, std::array<std::size_t, 2> lp, std::array<std::size_t, 2> rp) {
    const std::size_t dr = rho.dims()[1];
    CMatrix out(4, 4);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t d = 0; d < 2; ++d)
                    out(2 * a + b, 2 * c + d) = rho.matrix()(lp[a] * dr + rp[b], lp[c] * dr + rp[d]);
    return out;
}

// Min eigenvalue of the two-qubit partial transpose of an unnormalized block.
double pt_min_2x2(const CMatrix& block) {
    CMatrix pt(4, 4);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t d = 0; d < 2; ++d) pt(2 * a + d, 2 * c + b) = block(2 * a + b, 2 * c + d);
    return eigenvalues_hermitian(pt).front();
}

DensityOp rotated(const DensityOp& bip, std::uint64_t seed, std::size_t index) {
    Rng rng = derived_rng(seed, index);
    const CMatrix ul = random_unitary(bip.dims()[0], rng);
    const CMatrix ur = random_unitary(bip.dims()[1], rng);
    const CMatrix u = kron(ul, ur);
    CMatrix m = u * bip.matrix() * u.adjoint();
    return DensityOp::trusted(bip.dims(), std::move(m));
}

std::optional<DistillWitness> scan_projections(const DensityOp& bip, double tol) {
    const std::size_t dl = bip.dims()[0], dr = bip.dims()[1];
    for (std::size_t l0 = 0; l0 < dl; ++l0)
        for (std::size_t l1 = l0 + 1; l1 < dl; ++l1)
            for (std::size_t r0 = 0; r0 < dr; ++r0)
                for (std::size_t r1 = r0 + 1; r1 < dr; ++r1) {
                    const CMatrix block = block_2x2(bip, {l0, l1}, {r0, r1});
                    const double tr = block.trace().real();
                    if (tr <= 1e-9) continue;
                    const double m = pt_min_2x2(block);
                    if (m >= -tol) continue;
                    DistillWitness w;
                    w.kind = WitnessKind::projection_2x2;
                    w.evidence = m / tr;
                    w.left_pair = {l0, l1};
                    w.right_pair = {r0, r1};
                    w.projected = block * cplx(1.0 / tr);
                    return w;
                }
    return std::nullopt;
}

}  // namespace

CMatrix project_2x2(const DensityOp& rho, std::array<std::size_t, 2> left_pair, std::array<std::size_t, 2> right_pair) {
    if (rho.parties() != 2) throw Error("project_2x2: bipartite operator required");
    if (left_pair[0] == left_pair[1] || right_pair[0] == right_pair[1] || left_pair[0] >= rho.dims()[0] ||
        left_pair[1] >= rho.dims()[0] || right_pair[0] >= rho.dims()[1] || right_pair[1] >= rho.dims()[1])
        throw Error("project_2x2: index pair out of range");
    CMatrix block = block_2x2(rho, left_pair, right_pair);
    const double tr = block.trace().real();
    if (tr <= 1e-9) return {};
    block *= 1.0 / tr;
    return block;
}

std::optional<DistillWitness> witness_search(const DensityOp& rho, const PartySet& left, const WitnessBudget& budget,
                                             double tol) {
    const DensityOp bip = as_bipartite(rho, left);

    const std::size_t rank = numeric_rank(bip.matrix(), tol);
    const std::size_t rl = numeric_rank(partial_trace(bip, {0}).matrix(), tol);
    const std::size_t rr = numeric_rank(partial_trace(bip, {1}).matrix(), tol);
    std::optional<DistillWitness> found;
    if (rank < std::max(rl, rr)) {
        DistillWitness w;
        w.kind = WitnessKind::rank_deficit;
        w.evidence = static_cast<double>(std::max(rl, rr) - rank);
        found = w;
    }
    if (!found) {
        const Verdict red = check_reduction(bip, {0}, tol);
        if (red.fails()) {
            DistillWitness w;
            w.kind = WitnessKind::reduction_violation;
            w.evidence = red.evidence.value;
            found = w;
        }
    }
    if (!found) {
        const MCDetection mc = detect_max_correlated(bip, {0}, tol);
        if (mc.form && mc.form->off_diagonal() > 1e-8) {
            DistillWitness w;
            w.kind = WitnessKind::mc_entangled;
            w.evidence = mc.form->off_diagonal();
            found = w;
        }
    }
    if (!found) found = scan_projections(bip, tol);
    for (std::size_t i = 0; !found && i < budget.random_rotations; ++i) {
        found = scan_projections(rotated(bip, budget.seed, i), tol);
        if (found) {
            found->rotated = true;
            found->seed = budget.seed;
            found->rotation_index = i;
        }
    }
    if (found) {
        found->dims = {bip.dims()[0], bip.dims()[1]};
        found->verified = verify_witness(bip, {0}, *found, tol);
        if (!found->verified) return std::nullopt;
    }
    return found;
}

bool verify_witness(const DensityOp& rho, const PartySet& left, const DistillWitness& w, double tol) {
    const DensityOp bip = as_bipartite(rho, left);
    if (w.dims[0] != 0 && (w.dims[0] != bip.dims()[0] || w.dims[1] != bip.dims()[1]))
        throw Error("verify_witness: witness was found on a " + std::to_string(w.dims[0]) + "x" +
                    std::to_string(w.dims[1]) + " state, got " + std::to_string(bip.dims()[0]) + "x" +
                    std::to_string(bip.dims()[1]));
    switch (w.kind) {
        case WitnessKind::rank_deficit: {
            const std::size_t rank = numeric_rank(bip.matrix(), tol);
            const std::size_t rl = numeric_rank(partial_trace(bip, {0}).matrix(), tol);
            const std::size_t rr = numeric_rank(partial_trace(bip, {1}).matrix(), tol);
            return rank < std::max(rl, rr);
        }
        case WitnessKind::reduction_violation: return check_reduction(bip, {0}, tol).fails();
        case WitnessKind::mc_entangled: {
            const MCDetection mc = detect_max_correlated(bip, {0}, tol);
            return mc.form && mc.form->off_diagonal() > 1e-8;
        }
        case WitnessKind::projection_2x2: {
            const std::size_t dl = bip.dims()[0], dr = bip.dims()[1];
            for (std::size_t k : w.left_pair)
                if (k >= dl) throw Error("verify_witness: left index out of range");
            for (std::size_t k : w.right_pair)
                if (k >= dr) throw Error("verify_witness: right index out of range");
            const DensityOp src = w.rotated ? rotated(bip, w.seed, w.rotation_index) : bip;
            const CMatrix block = block_2x2(src, w.left_pair, w.right_pair);
            if (block.trace().real() <= 1e-9) return false;
            return pt_min_2x2(block) < -tol;
        }
    }
    return false;
}

}  // namespace enthier
