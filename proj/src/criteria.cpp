#include "enthier/criteria.hpp"

#include "enthier/error.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

namespace enthier {

std::string_view to_string(Status s) noexcept {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::unknown: return "unknown";
    }
    return "?";
}

std::string_view to_string(Criterion c) noexcept {
    switch (c) {
        case Criterion::separability: return "separability";
        case Criterion::ppt: return "ppt";
        case Criterion::non_distillability: return "non_distillability";
        case Criterion::reduction: return "reduction";
        case Criterion::majorization: return "majorization";
        case Criterion::conditional_entropy: return "conditional_entropy";
    }
    return "?";
}

std::string_view to_string(Label l) noexcept {
    switch (l) {
        case Label::S: return "S";
        case Label::P: return "P";
        case Label::N_candidate: return "N_candidate";
        case Label::D: return "D";
        case Label::M: return "M";
        case Label::Indeterminate: return "Indeterminate";
    }
    return "?";
}

char letter(Label l) noexcept {
    switch (l) {
        case Label::S: return 'S';
        case Label::P: return 'P';
        case Label::N_candidate: return 'N';
        case Label::D: return 'D';
        case Label::M: return 'M';
        case Label::Indeterminate: return '?';
    }
    return '?';
}

std::optional<Label> label_from_letter(char c) noexcept {
    switch (c) {
        case 'S': return Label::S;
        case 'P': return Label::P;
        case 'N': return Label::N_candidate;
        case 'D': return Label::D;
        case 'M': return Label::M;
        case '?': return Label::Indeterminate;
        default: return std::nullopt;
    }
}

Label max_label(Label a, Label b) noexcept {
    if (a == Label::Indeterminate || b == Label::Indeterminate) return Label::Indeterminate;
    return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

const Verdict* BipartiteClass::find(Criterion c) const noexcept {
    for (const Verdict& v : justification)
        if (v.criterion == c) return &v;
    return nullptr;
}

CMatrix MCForm::reconstruct() const {
    const std::size_t dl = left_basis.empty() ? 0 : left_basis.front().size();
    const std::size_t dr = right_basis.empty() ? 0 : right_basis.front().size();
    std::vector<CVector> pairs;
    for (std::size_t i = 0; i < left_basis.size(); ++i) pairs.push_back(kron(left_basis[i], right_basis[i]));
    CMatrix out(dl * dr, dl * dr);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (coefficients(i, j) != cplx(0.0)) out += coefficients(i, j) * CMatrix::outer(pairs[i], pairs[j]);
    return out;
}

double MCForm::off_diagonal() const {
    double m = 0.0;
    for (std::size_t i = 0; i < coefficients.rows(); ++i)
        for (std::size_t j = 0; j < coefficients.cols(); ++j)
            if (i != j) m = std::max(m, std::abs(coefficients(i, j)));
    return m;
}

namespace {

DensityOp bipartite(const DensityOp& rho, const PartySet& left) {
    if (rho.parties() == 2 && left.size() == 1 && left[0] == 0) return rho;
    return regroup(rho, left);
}

Verdict make(Criterion c, bool ok, std::string kind, double value) {
    Verdict v;
    v.criterion = c;
    v.status = ok ? Status::holds : Status::fails;
    v.evidence = {std::move(kind), value, {}};
    return v;
}

// min_k (partial sum of x - partial sum of y) over descending sorted inputs.
double majorization_margin(std::vector<double> x, std::vector<double> y) {
    const std::size_t len = std::max(x.size(), y.size());
    std::sort(x.begin(), x.end(), std::greater<>());
    std::sort(y.begin(), y.end(), std::greater<>());
    x.resize(len, 0.0);
    y.resize(len, 0.0);
    double sx = 0.0, sy = 0.0, margin = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        sx += x[k];
        sy += y[k];
        margin = std::min(margin, sx - sy);
    }
    return margin;
}

struct LocalInfo {
    std::size_t rank = 0;
    std::size_t left_rank = 0;
    std::size_t right_rank = 0;
};

LocalInfo local_info(const DensityOp& bip, double tol) {
    return {numeric_rank(bip.matrix(), tol), numeric_rank(partial_trace(bip, {0}).matrix(), tol),
            numeric_rank(partial_trace(bip, {1}).matrix(), tol)};
}

Verdict separability(Status s, std::string rule, std::string kind, double value, std::string note = {}) {
    Verdict v;
    v.criterion = Criterion::separability;
    v.status = s;
    v.rule = std::move(rule);
    v.evidence = {std::move(kind), value, std::move(note)};
    return v;
}

struct Union {
    std::vector<std::size_t> parent;
    explicit Union(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Block {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

// Direct-sum decomposition of a bipartite operator over orthogonal local
// subspaces spanned by computational basis vectors.
std::vector<Block> local_blocks(const DensityOp& bip) {
    const std::size_t dl = bip.dims()[0], dr = bip.dims()[1];
    const CMatrix& m = bip.matrix();
    const double cut = 1e-12 * std::max(1.0, m.max_abs());
    Union uf(dl + dr);
    std::vector<bool> used(dl + dr, false);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) <= cut) continue;
            const std::size_t a = r / dr, b = r % dr, a2 = c / dr, b2 = c % dr;
            uf.join(a, dl + b);
            uf.join(a2, dl + b2);
            uf.join(a, a2);
            used[a] = used[dl + b] = used[a2] = used[dl + b2] = true;
        }
    std::vector<Block> blocks;
    std::vector<std::size_t> roots;
    for (std::size_t node = 0; node < dl + dr; ++node) {
        if (!used[node]) continue;
        const std::size_t root = uf.find(node);
        auto it = std::find(roots.begin(), roots.end(), root);
        std::size_t k = static_cast<std::size_t>(it - roots.begin());
        if (it == roots.end()) {
            roots.push_back(root);
            blocks.emplace_back();
        }
        if (node < dl)
            blocks[k].left.push_back(node);
        else
            blocks[k].right.push_back(node - dl);
    }
    return blocks;
}

DensityOp extract_block(const DensityOp& bip, const Block& b) {
    const std::size_t dr = bip.dims()[1];
    const std::size_t n = b.left.size() * b.right.size();
    CMatrix sub(n, n);
    for (std::size_t i = 0; i < b.left.size(); ++i)
        for (std::size_t j = 0; j < b.right.size(); ++j)
            for (std::size_t k = 0; k < b.left.size(); ++k)
                for (std::size_t l = 0; l < b.right.size(); ++l)
                    sub(i * b.right.size() + j, k * b.right.size() + l) =
                        bip.matrix()(b.left[i] * dr + b.right[j], b.left[k] * dr + b.right[l]);
    const double t = sub.trace().real();
    sub *= 1.0 / t;
    return DensityOp::trusted({b.left.size(), b.right.size()}, std::move(sub));
}

// Rules (c), (b) and (d) on a PPT bipartite operator; nullopt when none applies.
// (c) goes first so a low-rank 2x2 state reports the rank argument.
std::optional<Verdict> structural_rules(const DensityOp& bip, double tol) {
    const LocalInfo info = local_info(bip, tol);
    const std::size_t lo = std::min(info.left_rank, info.right_rank);
    const std::size_t hi = std::max(info.left_rank, info.right_rank);
    if (info.rank <= hi)
        return separability(Status::holds, "c:rank", "rank", static_cast<double>(info.rank),
                            "PPT with rank " + std::to_string(info.rank) + " <= max local rank " +
                                std::to_string(hi));
    if (lo == 2 && hi <= 3)
        return separability(Status::holds, "b:peres", "local_ranks", static_cast<double>(lo * hi),
                            "PPT with local ranks " + std::to_string(lo) + "x" + std::to_string(hi));
    const MCDetection mc = detect_max_correlated(bip, {0}, tol);
    if (mc.form) {
        const double off = mc.form->off_diagonal();
        return separability(off <= 1e-8 ? Status::holds : Status::fails, "d:max_correlated", "mc_off_diagonal", off);
    }
    return std::nullopt;
}

}  // namespace

Verdict check_ppt(const DensityOp& rho, const PartySet& left, double tol) {
    const DensityOp bip = bipartite(rho, left);
    const PsdCheck pc = is_psd(partial_transpose(bip, {1}), tol);
    return make(Criterion::ppt, pc.psd, "min_eigenvalue", pc.min_eigenvalue);
}

Verdict check_reduction(const DensityOp& rho, const PartySet& left, double tol) {
    const DensityOp bip = bipartite(rho, left);
    const std::size_t dl = bip.dims()[0], dr = bip.dims()[1];
    const CMatrix rl = partial_trace(bip, {0}).matrix();
    const CMatrix rr = partial_trace(bip, {1}).matrix();
    const PsdCheck a = is_psd(kron(rl, CMatrix::identity(dr)) - bip.matrix(), tol);
    const PsdCheck b = is_psd(kron(CMatrix::identity(dl), rr) - bip.matrix(), tol);
    return make(Criterion::reduction, a.psd && b.psd, "min_eigenvalue", std::min(a.min_eigenvalue, b.min_eigenvalue));
}

SpectralVerdicts check_spectral(const DensityOp& rho, const PartySet& left, const CriteriaOptions& opts) {
    const DensityOp bip = bipartite(rho, left);
    const auto s_lr = spectrum(bip);
    const auto s_l = spectrum(partial_trace(bip, {0}));
    const auto s_r = spectrum(partial_trace(bip, {1}));

    SpectralVerdicts out;
    const double margin = std::min(majorization_margin(s_l, s_lr), majorization_margin(s_r, s_lr));
    out.majorization =
        make(Criterion::majorization, majorizes(s_l, s_lr) && majorizes(s_r, s_lr), "partial_sum_margin", margin);

    const double h_lr = entropy(s_lr), h_l = entropy(s_l), h_r = entropy(s_r);
    out.entropy_gap_left = h_lr - h_l;
    out.entropy_gap_right = h_lr - h_r;
    const double gap = std::min(out.entropy_gap_left, out.entropy_gap_right);
    out.conditional_entropy = make(Criterion::conditional_entropy, gap >= -opts.entropy_tol, "entropy_gap", gap);

    out.spectra_equal_left = spectral_distance(s_l, s_lr) <= opts.spectral_tol;
    out.spectra_equal_right = spectral_distance(s_r, s_lr) <= opts.spectral_tol;
    out.entropy_equal_left = std::abs(out.entropy_gap_left) <= opts.entropy_tol;
    out.entropy_equal_right = std::abs(out.entropy_gap_right) <= opts.entropy_tol;
    return out;
}

MCDetection detect_max_correlated(const DensityOp& rho, const PartySet& left, double tol) {
    const DensityOp bip = bipartite(rho, left);
    const std::size_t dl = bip.dims()[0], dr = bip.dims()[1];
    const CMatrix& m = bip.matrix();
    MCDetection result;
    result.residual = std::numeric_limits<double>::infinity();

    const CMatrix rl = partial_trace(bip, {0}).matrix();
    // For an MC operator every tr_R(rho^k) is diagonal in the correlated left
    // basis; a generic combination breaks ties that rho_L alone leaves.
    const CMatrix m2 = m * m;
    const CMatrix m3 = m2 * m;
    const CMatrix mixed = rl + 0.5772156649 * partial_trace(DensityOp::trusted(bip.dims(), m2), {0}).matrix() +
                          0.3183098862 * partial_trace(DensityOp::trusted(bip.dims(), m3), {0}).matrix();

    const std::array<const CMatrix*, 2> generators{&mixed, &rl};
    for (const CMatrix* gen : generators) {
        const EigenSystem es = eig_hermitian(*gen);
        const double cut = tol * std::max(1.0, es.values.back());
        for (std::size_t k = 0; k + 1 < es.values.size(); ++k)
            if (es.values[k] > cut && es.values[k + 1] - es.values[k] < 1e-6) result.degenerate = true;

        std::vector<CVector> lb, rb;
        bool ok = true;
        for (std::size_t k = es.values.size(); k-- > 0 && ok;) {
            const CVector b = es.vectors.column(k);
            const double weight = inner(b, rl * b).real();
            if (weight <= tol) continue;
            // <b|rho|b> on the right side must be rank one.
            CMatrix cond(dr, dr);
            for (std::size_t i = 0; i < dl; ++i)
                for (std::size_t j = 0; j < dl; ++j) {
                    const cplx w = std::conj(b[i]) * b[j];
                    if (std::abs(w) < 1e-300) continue;
                    for (std::size_t x = 0; x < dr; ++x)
                        for (std::size_t y = 0; y < dr; ++y) cond(x, y) += w * m(i * dr + x, j * dr + y);
                }
            const EigenSystem ce = eig_hermitian(cond);
            if (weight - ce.values.back() > 1e-8 * std::max(1.0, weight)) {
                ok = false;
                break;
            }
            lb.push_back(b);
            rb.push_back(ce.vectors.column(dr - 1));
        }
        if (!ok || lb.empty()) continue;
        for (std::size_t i = 0; i < rb.size() && ok; ++i)
            for (std::size_t j = i + 1; j < rb.size(); ++j)
                if (std::abs(inner(rb[i], rb[j])) > 1e-8) {
                    ok = false;
                    break;
                }
        if (!ok) continue;

        MCForm form;
        form.left_basis = lb;
        form.right_basis = rb;
        form.coefficients = CMatrix(lb.size(), lb.size());
        std::vector<CVector> pairs;
        for (std::size_t i = 0; i < lb.size(); ++i) pairs.push_back(kron(lb[i], rb[i]));
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = 0; j < pairs.size(); ++j) form.coefficients(i, j) = inner(pairs[i], m * pairs[j]);
        const double residual = (form.reconstruct() - m).frobenius_norm();
        result.residual = std::min(result.residual, residual);
        if (residual <= 1e-8) {
            result.form = std::move(form);
            result.degenerate = false;
            return result;
        }
    }
    return result;
}

Verdict decide_separable(const DensityOp& rho, const PartySet& left, const SeparabilityContext& ctx, double tol) {
    const DensityOp bip = bipartite(rho, left);

    const Verdict ppt = check_ppt(bip, {0}, tol);
    if (ppt.fails()) return separability(Status::fails, "a:npt", "min_eigenvalue", ppt.evidence.value);

    if (auto v = structural_rules(bip, tol)) return *v;

    const auto blocks = local_blocks(bip);
    if (blocks.size() >= 2) {
        bool all = true;
        for (const Block& b : blocks) {
            const auto v = structural_rules(extract_block(bip, b), tol);
            if (!v || !v->holds()) {
                all = false;
                break;
            }
        }
        if (all)
            return separability(Status::holds, "c':blocks", "blocks", static_cast<double>(blocks.size()),
                                "every direct-sum block is separable");
    }

    for (const NeighbourHint& h : ctx.hints) {
        if (!h.neighbour_ppt) continue;
        return separability(h.entropy_equal ? Status::holds : Status::fails, "e:neighbour", "entropy_equal",
                            h.entropy_equal ? 1.0 : 0.0, h.label);
    }

    if (ctx.certified_separable) {
        Verdict v = separability(*ctx.certified_separable ? Status::holds : Status::fails, "f:certificate",
                                 "certificate", *ctx.certified_separable ? 1.0 : 0.0, ctx.certificate_note);
        v.certificate_based = true;
        return v;
    }

    return separability(Status::unknown, "none", "undecided", 0.0,
                        "PPT, rank above local ranks, not maximally correlated, no applicable context");
}

BipartiteClass classify_bipartite(const DensityOp& rho, const PartySet& left, const SeparabilityContext& ctx,
                                  const CriteriaOptions& opts) {
    const DensityOp bip = bipartite(rho, left);
    BipartiteClass cls;
    const Verdict ppt = check_ppt(bip, {0}, opts.tol);
    const Verdict red = check_reduction(bip, {0}, opts.tol);
    const SpectralVerdicts spec = check_spectral(bip, {0}, opts);
    const Verdict sep = decide_separable(bip, {0}, ctx, opts.tol);

    Verdict nd;
    nd.criterion = Criterion::non_distillability;
    if (ppt.holds()) {
        nd.status = Status::holds;
        nd.evidence = {"ppt", ppt.evidence.value, "PPT states are non-distillable"};
        cls.label = sep.holds() ? Label::S : sep.fails() ? Label::P : Label::Indeterminate;
    } else if (red.fails()) {
        nd.status = Status::fails;
        nd.evidence = {"reduction_violation", red.evidence.value, {}};
        cls.label = Label::M;
    } else {
        cls.witness = witness_search(bip, {0}, WitnessBudget::plus_random_rotations(opts.witness_rotations, opts.seed),
                                     opts.tol);
        if (cls.witness) {
            nd.status = Status::fails;
            nd.evidence = {std::string(to_string(cls.witness->kind)), cls.witness->evidence, {}};
            cls.label = Label::D;
        } else {
            nd.status = Status::unknown;
            nd.evidence = {"no_witness", 0.0, "no one-copy witness found"};
            cls.label = Label::N_candidate;
        }
    }
    cls.justification = {sep, ppt, nd, red, spec.majorization, spec.conditional_entropy};
    return cls;
}

bool hierarchy_consistent(const std::vector<Verdict>& verdicts) {
    const std::array<Criterion, 6> chain{Criterion::separability, Criterion::ppt,        Criterion::non_distillability,
                                         Criterion::reduction,    Criterion::majorization, Criterion::conditional_entropy};
    std::array<Status, 6> st{};
    st.fill(Status::unknown);
    for (const Verdict& v : verdicts)
        for (std::size_t k = 0; k < chain.size(); ++k)
            if (v.criterion == chain[k]) st[k] = v.status;
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j)
            if (st[i] == Status::holds && st[j] == Status::fails) return false;
    return true;
}

bool label_consistent(const BipartiteClass& cls) {
    const Verdict* sep = cls.find(Criterion::separability);
    const Verdict* ppt = cls.find(Criterion::ppt);
    const Verdict* red = cls.find(Criterion::reduction);
    if (!sep || !ppt || !red) return false;
    if (!hierarchy_consistent(cls.justification)) return false;
    switch (cls.label) {
        case Label::S: return sep->holds() && ppt->holds();
        case Label::P: return sep->fails() && ppt->holds();
        case Label::N_candidate: return ppt->fails() && red->holds() && !cls.witness;
        case Label::D: return ppt->fails() && red->holds() && cls.witness.has_value();
        case Label::M: return red->fails();
        case Label::Indeterminate: return sep->status == Status::unknown;
    }
    return false;
}

InferenceRecord theorem2_infer(const PureState& psi, std::array<std::size_t, 2> focus, std::size_t anchor,
                               const CriteriaOptions& opts) {
    if (psi.parties() != 3) throw Error("theorem2_infer: tripartite state required");
    const std::size_t x = focus[0], y = focus[1], z = anchor;
    if (x > 2 || y > 2 || z > 2 || x == y || y == z || x == z)
        throw Error("theorem2_infer: focus and anchor must be the three distinct parties");

    InferenceRecord rec;
    rec.focus = focus;
    rec.anchor = anchor;

    const DensityOp rho_yz = reduce(psi, {y, z});
    if (check_ppt(rho_yz, {0}, opts.tol).holds()) {
        rec.applicable = true;
        rec.reason = "anchor pair PPT, hence non-distillable";
    } else {
        const auto ranks = local_ranks(psi, opts.tol);
        const bool qubit = std::any_of(ranks.begin(), ranks.end(), [](std::size_t r) { return r <= 2; });
        if (qubit && check_reduction(rho_yz, {0}, opts.tol).holds()) {
            rec.applicable = true;
            rec.reason = "qubit reduced state and anchor pair satisfies reduction";
        } else {
            rec.reason = "anchor pair is NPT and the qubit shortcut does not apply";
            return rec;
        }
    }

    const DensityOp rho_xy = reduce(psi, {x, y});
    rec.separability = decide_separable(rho_xy, {0}, {}, opts.tol);
    rec.ppt = check_ppt(rho_xy, {0}, opts.tol);
    rec.reduction = check_reduction(rho_xy, {0}, opts.tol);
    const SpectralVerdicts spec = check_spectral(rho_xy, {0}, opts);
    rec.spectra_equal = spec.spectra_equal_left;
    rec.entropy_equal = spec.entropy_equal_left;

    std::vector<bool> decided;
    if (rec.separability.status != Status::unknown) decided.push_back(rec.separability.holds());
    decided.push_back(rec.ppt.holds());
    decided.push_back(rec.reduction.holds());
    decided.push_back(rec.spectra_equal);
    decided.push_back(rec.entropy_equal);
    rec.consistent = std::all_of(decided.begin(), decided.end(), [&](bool b) { return b == decided.front(); });
    return rec;
}

}  // namespace enthier
