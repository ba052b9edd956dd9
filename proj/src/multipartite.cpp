#include "enthier/multipartite.hpp"

#include "enthier/error.hpp"
#include "enthier/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace enthier {

std::vector<Bipartition> bipartitions(std::size_t m) {
    if (m < 2) throw Error("bipartitions: need at least two parties");
    if (m > 10) throw Error("bipartitions: at most 10 parties supported");
    std::vector<Bipartition> cuts;
    const std::size_t count = (std::size_t{1} << (m - 1)) - 1;
    for (std::size_t mask = 1; mask <= count; ++mask) {
        Bipartition b;
        b.left.push_back(0);
        for (std::size_t j = 1; j < m; ++j) ((mask >> (j - 1)) & 1u ? b.right : b.left).push_back(j);
        cuts.push_back(std::move(b));
    }
    return cuts;
}

BipartitionReport check_all_bipartitions_ppt(const DensityOp& rho, double tol) {
    BipartitionReport rep;
    if (rho.parties() < 2) return rep;
    rep.cuts = bipartitions(rho.parties());
    for (const Bipartition& b : rep.cuts) {
        const PsdCheck pc = is_psd(partial_transpose(rho, b.right), tol);
        Verdict v;
        v.criterion = Criterion::ppt;
        v.status = pc.psd ? Status::holds : Status::fails;
        v.evidence = {"min_eigenvalue", pc.min_eigenvalue, {}};
        if (!pc.psd) rep.overall = Status::fails;
        rep.verdicts.push_back(std::move(v));
    }
    return rep;
}

PureState GhzForm::reconstruct() const {
    if (basis.empty()) throw Error("GhzForm: empty form");
    Dims dims;
    for (const auto& party : basis) dims.push_back(party.front().size());
    CVector amps(total_dim(dims));
    for (std::size_t i = 0; i < p.size(); ++i) {
        CVector term{std::sqrt(p[i]) * phases[i]};
        for (const auto& party : basis) term = kron(term, party[i]);
        for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += term[k];
    }
    return PureState(std::move(dims), std::move(amps), true);
}

namespace {

struct Branch {
    double weight;
    std::vector<CVector> vectors;  // party 0 first
    cplx phase;
};

// Tries one party-0 basis (columns of `basis`); returns the form on success.
std::optional<GhzForm> try_basis(const PureState& psi, std::size_t n, const CMatrix& basis, double tol,
                                 double& best_residual) {
    const std::size_t d0 = psi.dims()[0];
    const std::size_t rest = psi.dim() / d0;
    const Dims rest_dims(psi.dims().begin() + 1, psi.dims().end());
    std::vector<Branch> branches;
    for (std::size_t k = 0; k < basis.cols(); ++k) {
        const CVector e = basis.column(k);
        CVector phi(rest);
        for (std::size_t i = 0; i < d0; ++i) {
            const cplx w = std::conj(e[i]);
            if (w == cplx(0.0)) continue;
            for (std::size_t r = 0; r < rest; ++r) phi[r] += w * psi.amps()[i * rest + r];
        }
        const double nrm = norm(phi);
        if (nrm * nrm <= tol) continue;
        for (cplx& z : phi) z /= nrm;

        Branch b{nrm * nrm, {e}, 1.0};
        if (rest_dims.size() == 1) {
            b.vectors.push_back(phi);
        } else {
            const PureState cond(rest_dims, phi);
            for (std::size_t j = 0; j < rest_dims.size(); ++j) {
                const EigenSystem es = eig_hermitian(reduce(cond, {j}).matrix());
                if (es.values.back() < 1.0 - 1e-8) return std::nullopt;
                b.vectors.push_back(es.vectors.column(es.values.size() - 1));
            }
            CVector prod{1.0};
            for (std::size_t j = 1; j < b.vectors.size(); ++j) prod = kron(prod, b.vectors[j]);
            const cplx c = inner(prod, phi);
            b.phase = c / std::abs(c);
        }
        branches.push_back(std::move(b));
    }
    if (branches.empty()) return std::nullopt;

    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t a = 0; a < branches.size(); ++a)
            for (std::size_t c = a + 1; c < branches.size(); ++c)
                if (std::abs(inner(branches[a].vectors[j], branches[c].vectors[j])) > 1e-8) return std::nullopt;

    std::stable_sort(branches.begin(), branches.end(),
                     [](const Branch& x, const Branch& y) { return x.weight > y.weight; });
    GhzForm form;
    form.n = n;
    form.basis.assign(psi.parties(), {});
    for (const Branch& b : branches) {
        form.p.push_back(b.weight);
        form.phases.push_back(b.phase);
        for (std::size_t j = 0; j < psi.parties(); ++j) form.basis[j].push_back(b.vectors[j]);
    }
    // Weights sum to one only if the basis covers the support of rho_0.
    const double total = std::accumulate(form.p.begin(), form.p.end(), 0.0);
    CVector amps(psi.dim());
    for (std::size_t i = 0; i < form.p.size(); ++i) {
        CVector term{std::sqrt(form.p[i]) * form.phases[i]};
        for (const auto& party : form.basis) term = kron(term, party[i]);
        for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += term[k];
    }
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] -= psi.amps()[k];
    form.residual = norm(amps);
    best_residual = std::min(best_residual, form.residual);
    if (form.residual > 1e-8 || std::abs(total - 1.0) > 1e-8) return std::nullopt;
    return form;
}

}  // namespace

GhzDetection detect_generalized_ghz(const PureState& psi, std::size_t n, double tol, std::uint64_t seed) {
    const std::size_t m = psi.parties();
    if (n < 2 || n > m) throw Error("detect_generalized_ghz: need 2 <= n <= number of parties");
    GhzDetection det;
    det.residual = std::numeric_limits<double>::infinity();

    std::vector<CMatrix> candidates;
    const EigenSystem es = eig_hermitian(reduce(psi, {0}).matrix());
    candidates.push_back(es.vectors);
    const double cut = tol * std::max(1.0, es.values.back());
    bool ties = false;
    for (std::size_t k = 0; k + 1 < es.values.size(); ++k)
        if (es.values[k] > cut && es.values[k + 1] - es.values[k] < 1e-6) ties = true;

    // Contracting random vectors on parties 2.. leaves sum_i sqrt(p_i) c_i |i>|i>
    // on parties 0 and 1 with generically distinct |c_i|.
    for (std::uint64_t s = 0; ties && s < 3; ++s) {
        Rng rng = derived_rng(seed, 0x6a0 + s);
        CVector v = psi.amps();
        std::size_t width = psi.dim();
        for (std::size_t j = m; j-- > 2;) {
            const std::size_t d = psi.dims()[j];
            const CVector w = random_unit_vector(d, rng);
            CVector next(width / d);
            for (std::size_t r = 0; r < next.size(); ++r)
                for (std::size_t x = 0; x < d; ++x) next[r] += std::conj(w[x]) * v[r * d + x];
            v = std::move(next);
            width /= d;
        }
        const std::size_t d0 = psi.dims()[0], d1 = psi.dims()[1];
        CMatrix mat(d0, d1, v);
        candidates.push_back(eig_hermitian(mat * mat.adjoint()).vectors);
    }

    for (const CMatrix& basis : candidates) {
        if (auto form = try_basis(psi, n, basis, tol, det.residual)) {
            det.form = std::move(form);
            return det;
        }
    }
    det.degenerate = ties;
    return det;
}

namespace {

// Diagonal within tol after rotating every party into its own eigenbasis, or
// already diagonal in the computational basis.
bool product_diagonal(const DensityOp& rho, double tol) {
    auto diagonal = [&](const CMatrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (i != j && std::abs(m(i, j)) > tol) return false;
        return true;
    };
    if (diagonal(rho.matrix())) return true;
    CMatrix u{{1.0}};
    for (std::size_t j = 0; j < rho.parties(); ++j) u = kron(u, eig_hermitian(partial_trace(rho, {j}).matrix()).vectors);
    return diagonal(u.adjoint() * rho.matrix() * u);
}

}  // namespace

Theorem11Report theorem11_verify(const PureState& psi, std::size_t n, double tol, std::uint64_t seed) {
    const std::size_t m = psi.parties();
    if (n < 2 || n > m) throw Error("theorem11_verify: need 2 <= n <= number of parties");
    Theorem11Report rep;
    rep.n = n;

    std::vector<DensityOp> reduced;
    rep.statement2 = Status::holds;
    for (std::size_t i = 0; i < n; ++i) {
        PartySet keep;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) keep.push_back(j);
        reduced.push_back(reduce(psi, keep));
        rep.reduced_ppt.push_back(check_all_bipartitions_ppt(reduced.back(), tol));
        if (rep.reduced_ppt.back().overall == Status::fails) rep.statement2 = Status::fails;
    }

    rep.detection = detect_generalized_ghz(psi, n, tol, seed);
    rep.statement4 = rep.detection.form.has_value();

    if (std::all_of(reduced.begin(), reduced.end(), [&](const DensityOp& r) { return product_diagonal(r, 1e-8); })) {
        rep.statement3 = Status::holds;
        rep.statement3_rule = "diagonal in a product basis";
    } else if (rep.statement4) {
        rep.statement3 = Status::holds;
        rep.statement3_rule = "generalized GHZ form";
    } else if (rep.statement2 == Status::fails) {
        rep.statement3 = Status::fails;
        rep.statement3_rule = "some bipartition is NPT";
    } else {
        rep.statement3_rule = "undecided";
    }

    const bool s2 = rep.statement2 == Status::holds;
    rep.consistent = s2 == rep.statement4 &&
                     (rep.statement3 == Status::unknown || (rep.statement3 == Status::holds) == rep.statement4);
    return rep;
}

PureState w_state(std::size_t parties) {
    if (parties < 2 || parties > 16) throw Error("w_state: number of parties must be in [2, 16]");
    CVector amps(std::size_t{1} << parties);
    for (std::size_t k = 0; k < parties; ++k) amps[std::size_t{1} << k] = 1.0;
    return PureState(Dims(parties, 2), std::move(amps), true);
}

}  // namespace enthier
