#include "enthier/classify.hpp"

#include "enthier/error.hpp"
#include "enthier/random.hpp"

#include <algorithm>
#include <cmath>

namespace enthier {

std::string triple_name(const LabelTriple& t) {
    std::string s = "S_";
    for (Label l : t) s += letter(l);
    return s;
}

std::optional<LabelTriple> parse_triple(std::string_view s) {
    if (s.size() == 5 && s.substr(0, 2) == "S_") s.remove_prefix(2);
    if (s.size() != 3) return std::nullopt;
    LabelTriple t;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto l = label_from_letter(s[k]);
        if (!l) return std::nullopt;
        t[k] = *l;
    }
    return t;
}

LabelTriple canonical(const LabelTriple& t) {
    LabelTriple c = t;
    std::sort(c.begin(), c.end(), [](Label a, Label b) { return static_cast<int>(a) < static_cast<int>(b); });
    return c;
}

std::size_t pair_index(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == 1) return 0;
    if (a == 1 && b == 2) return 1;
    if (a == 0 && b == 2) return 2;
    throw Error("pair_index: parties must be two distinct indices below 3");
}

Certificate combine_certificates(const Certificate& a, const Certificate& b) {
    Certificate c;
    c.family = a.family + "*" + b.family;
    c.params = "(" + a.params + ")*(" + b.params + ")";
    for (std::size_t k = 0; k < 3; ++k) {
        c.claimed[k] = max_label(a.claimed[k], b.claimed[k]);
        const auto& x = a.pair_separable[k];
        const auto& y = b.pair_separable[k];
        if ((x && !*x) || (y && !*y))
            c.pair_separable[k] = false;
        else if (x && y)
            c.pair_separable[k] = true;
    }
    if (a.decomposition_size && b.decomposition_size)
        c.decomposition_size = *a.decomposition_size + *b.decomposition_size;
    c.note = "direct sum";
    return c;
}

Certificate permute_certificate(const Certificate& c, std::span<const std::size_t> order) {
    if (order.size() != 3) throw Error("permute_certificate: order must have three entries");
    Certificate out = c;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t old = pair_index(order[kPairs[k][0]], order[kPairs[k][1]]);
        out.claimed[k] = c.claimed[old];
        out.pair_separable[k] = c.pair_separable[old];
    }
    return out;
}

LabelTriple TripleClass::raw() const { return {pairs[0].label, pairs[1].label, pairs[2].label}; }

LabelTriple TripleClass::canonical() const { return enthier::canonical(raw()); }

std::string TripleClass::name() const { return triple_name(raw()); }

bool TripleClass::decisive() const {
    return std::none_of(pairs.begin(), pairs.end(), [](const BipartiteClass& p) {
        return p.label == Label::Indeterminate || p.label == Label::N_candidate;
    });
}

bool TripleClass::certificate_used() const {
    for (const auto& p : pairs)
        for (const auto& v : p.justification)
            if (v.certificate_based) return true;
    return false;
}

TripleClass classify_tripartite(const PureState& psi, const ClassifyOptions& opts) {
    if (psi.parties() != 3) throw Error("classify_tripartite: tripartite state required");
    const CriteriaOptions& co = opts.criteria;

    std::array<DensityOp, 3> rho;
    std::array<bool, 3> ppt{};
    std::array<double, 3> h_single{};
    for (std::size_t k = 0; k < 3; ++k) {
        rho[k] = reduce(psi, {kPairs[k][0], kPairs[k][1]});
        ppt[k] = check_ppt(rho[k], {0}, co.tol).holds();
        h_single[k] = entropy(reduce(psi, {k}));
    }

    TripleClass out;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t x = kPairs[k][0], y = kPairs[k][1], z = 3 - x - y;
        const double h_pair = entropy(rho[k]);
        SeparabilityContext ctx;
        // A PPT neighbour (y,z) ties separability of (x,y) to H(x) == H(xy);
        // likewise for a PPT neighbour (x,z) with H(y).
        if (ppt[pair_index(y, z)])
            ctx.hints.push_back({true, std::abs(h_single[x] - h_pair) <= co.entropy_tol,
                                 "neighbour pair " + std::to_string(y) + std::to_string(z) + " PPT"});
        if (ppt[pair_index(x, z)])
            ctx.hints.push_back({true, std::abs(h_single[y] - h_pair) <= co.entropy_tol,
                                 "neighbour pair " + std::to_string(x) + std::to_string(z) + " PPT"});
        if (opts.certificate && opts.certificate->pair_separable[k]) {
            ctx.certified_separable = opts.certificate->pair_separable[k];
            ctx.certificate_note = opts.certificate->family + ": " + opts.certificate->note;
        }
        out.pairs[k] = classify_bipartite(rho[k], {0}, ctx, co);
    }
    return out;
}

namespace {

// Sum over a basis of party p of the Schmidt ranks of the conditional states
// of the other two parties.
std::size_t slice_terms(const PureState& psi, std::size_t p, const CMatrix& basis, double tol) {
    std::array<std::size_t, 3> order{p, (p + 1) % 3, (p + 2) % 3};
    const PureState q = permute_parties(psi, order);
    const std::size_t dp = q.dims()[0], d1 = q.dims()[1], d2 = q.dims()[2];
    std::size_t total = 0;
    for (std::size_t k = 0; k < basis.cols(); ++k) {
        const CVector e = basis.column(k);
        CVector phi(d1 * d2);
        for (std::size_t i = 0; i < dp; ++i) {
            const cplx w = std::conj(e[i]);
            if (w == cplx(0.0)) continue;
            for (std::size_t r = 0; r < d1 * d2; ++r) phi[r] += w * q.amps()[i * d1 * d2 + r];
        }
        const double n = norm(phi);
        if (n * n <= tol) continue;
        CMatrix m(d1, d2, phi);
        m *= 1.0 / n;
        total += numeric_rank(m * m.adjoint(), tol);
    }
    return total;
}

}  // namespace

RankBounds tensor_rank_bounds(const PureState& psi, std::optional<std::size_t> known, const TripleClass* cls,
                              double tol) {
    if (psi.parties() != 3) throw Error("tensor_rank_bounds: tripartite state required");
    const auto ranks = local_ranks(psi, tol);
    RankBounds b;
    b.lower = *std::max_element(ranks.begin(), ranks.end());
    b.lower_method = "max local rank";
    if (cls) {
        for (std::size_t k = 0; k < 3; ++k) {
            const BipartiteClass& p = cls->pairs[k];
            const Verdict* red = p.find(Criterion::reduction);
            const Verdict* ppt = p.find(Criterion::ppt);
            if (!red || !ppt || !red->holds() || !ppt->fails()) continue;
            const std::size_t need = std::max(ranks[kPairs[k][0]], ranks[kPairs[k][1]]) + 1;
            if (need > b.lower) {
                b.lower = need;
                b.lower_method = "entangled pair satisfying reduction";
            }
        }
    }

    std::array<std::size_t, 3> sorted{ranks[0], ranks[1], ranks[2]};
    std::sort(sorted.begin(), sorted.end());
    b.upper = sorted[0] * sorted[1];
    b.upper_method = "two smallest local ranks";
    for (std::size_t p = 0; p < 3; ++p) {
        const EigenSystem es = eig_hermitian(reduce(psi, {p}).matrix());
        const std::size_t t = std::min(slice_terms(psi, p, es.vectors, tol),
                                       slice_terms(psi, p, CMatrix::identity(psi.dims()[p]), tol));
        if (t < b.upper) {
            b.upper = t;
            b.upper_method = "slice expansion";
        }
    }
    if (known && *known < b.upper) {
        b.upper = *known;
        b.upper_method = "known decomposition";
    }
    if (b.lower > b.upper) throw Error("tensor_rank_bounds: lower bound exceeds upper bound");
    return b;
}

const std::vector<LabelTriple>& essential_subsets() {
    using L = Label;
    static const std::vector<LabelTriple> rows{
        {L::S, L::S, L::S}, {L::S, L::S, L::M}, {L::S, L::M, L::M}, {L::P, L::M, L::M}, {L::N_candidate, L::M, L::M},
        {L::D, L::D, L::D}, {L::D, L::D, L::M}, {L::D, L::M, L::M}, {L::M, L::M, L::M},
    };
    return rows;
}

namespace {

std::vector<ConstraintCheck> row_checks(const LabelTriple& row, const RankBounds& b, std::size_t da, std::size_t db,
                                        std::size_t dc) {
    using L = Label;
    std::vector<ConstraintCheck> out;
    auto eq = [&](const char* name, std::size_t d) { out.push_back({std::string("r = ") + name, b.lower <= d && d <= b.upper}); };
    auto ge = [&](const char* name, std::size_t d) { out.push_back({std::string("r >= ") + name, b.upper >= d}); };
    auto gt = [&](const char* name, std::size_t d) { out.push_back({std::string("r > ") + name, b.upper > d}); };
    auto rel = [&](std::string s, bool ok) { out.push_back({std::move(s), ok}); };
    const LabelTriple c = canonical(row);
    if (c == LabelTriple{L::S, L::S, L::S}) {
        eq("d_A", da);
        rel("d_A = d_B", da == db);
        rel("d_B = d_C", db == dc);
    } else if (c == LabelTriple{L::S, L::S, L::M}) {
        eq("d_A", da);
        rel("d_A = d_C", da == dc);
        rel("d_C >= d_B", dc >= db);
    } else if (c == LabelTriple{L::S, L::M, L::M}) {
        eq("d_C", dc);
        rel("d_C >= d_A", dc >= da);
        rel("d_C >= d_B", dc >= db);
    } else if (c == LabelTriple{L::P, L::M, L::M} || c == LabelTriple{L::N_candidate, L::M, L::M}) {
        ge("d_C", dc);
        rel("d_C > d_A", dc > da);
        rel("d_C > d_B", dc > db);
    } else if (c == LabelTriple{L::D, L::D, L::D}) {
        gt("d_C", dc);
        rel("d_C = d_B", dc == db);
        rel("d_B = d_A", db == da);
    } else if (c == LabelTriple{L::D, L::D, L::M}) {
        gt("d_C", dc);
        rel("d_C = d_A", dc == da);
        rel("d_A >= d_B", da >= db);
    } else if (c == LabelTriple{L::D, L::M, L::M}) {
        ge("d_C", dc);
        rel("d_C >= d_A", dc >= da);
        rel("d_C >= d_B", dc >= db);
        gt("d_A", da);
        gt("d_B", db);
    }
    return out;
}

// Table rows in (AB, BC, CA) order.
const std::vector<LabelTriple>& table_rows() {
    using L = Label;
    static const std::vector<LabelTriple> rows{
        {L::S, L::S, L::S}, {L::S, L::S, L::M}, {L::S, L::M, L::M}, {L::P, L::M, L::M}, {L::N_candidate, L::M, L::M},
        {L::D, L::D, L::D}, {L::D, L::D, L::M}, {L::D, L::M, L::M}, {L::M, L::M, L::M},
    };
    return rows;
}

}  // namespace

TableReport check_table_constraints(const LabelTriple& t, const RankBounds& b, std::array<std::size_t, 3> ranks) {
    TableReport rep;
    const LabelTriple c = canonical(t);
    const auto& ess = essential_subsets();
    rep.essential = std::find(ess.begin(), ess.end(), c) != ess.end();
    rep.contradiction = !rep.essential;
    if (!rep.essential) return rep;

    std::array<std::size_t, 3> sigma{0, 1, 2};
    bool have = false;
    for (const LabelTriple& row : table_rows()) {
        if (canonical(row) != c) continue;
        rep.row = triple_name(row);
        do {
            LabelTriple mapped;
            for (std::size_t k = 0; k < 3; ++k) mapped[k] = t[pair_index(sigma[kPairs[k][0]], sigma[kPairs[k][1]])];
            if (mapped != row) continue;
            auto checks = row_checks(row, b, ranks[sigma[0]], ranks[sigma[1]], ranks[sigma[2]]);
            const bool ok = std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& x) { return x.pass; });
            if (!have || ok) {
                rep.relabel = sigma;
                rep.checks = std::move(checks);
                rep.pass = ok;
                have = true;
            }
            if (ok) return rep;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
    return rep;
}

bool pair_pattern_consistent(const LabelTriple& t) {
    const bool certified_nd = std::any_of(t.begin(), t.end(), [](Label l) { return l == Label::S || l == Label::P; });
    if (!certified_nd) return true;
    using L = Label;
    const LabelTriple c = canonical(t);
    return c == LabelTriple{L::S, L::S, L::S} || c == LabelTriple{L::S, L::S, L::M} ||
           c == LabelTriple{L::S, L::M, L::M} || c == LabelTriple{L::P, L::M, L::M};
}

bool monogamy_consistent(const LabelTriple& t) {
    const bool all_entangled =
        std::none_of(t.begin(), t.end(), [](Label l) { return l == Label::S || l == Label::Indeterminate; });
    for (std::size_t k = 0; k < 3; ++k) {
        const Label a = t[(k + 1) % 3], b = t[(k + 2) % 3];
        if ((t[k] == Label::P || t[k] == Label::N_candidate) && all_entangled && (a != Label::M || b != Label::M))
            return false;
        auto strong = [](Label l) { return l == Label::D || l == Label::M || l == Label::Indeterminate; };
        if (t[k] == Label::D && (!strong(a) || !strong(b))) return false;
    }
    return true;
}

PureState monoid_product(const PureState& a, const PureState& b, double w1, double w2) {
    if (a.parties() != 3 || b.parties() != 3) throw Error("monoid_product: tripartite states required");
    if (!(w1 > 0.0) || !(w2 > 0.0) || std::abs(w1 * w1 + w2 * w2 - 1.0) > 1e-9)
        throw Error("monoid_product: weights must be positive with w1^2 + w2^2 = 1");
    Dims dims(3);
    for (std::size_t k = 0; k < 3; ++k) dims[k] = a.dims()[k] + b.dims()[k];
    CVector amps(total_dim(dims));
    auto embed = [&](const PureState& s, double w, std::size_t o0, std::size_t o1, std::size_t o2) {
        const auto& d = s.dims();
        for (std::size_t i = 0; i < d[0]; ++i)
            for (std::size_t j = 0; j < d[1]; ++j)
                for (std::size_t k = 0; k < d[2]; ++k)
                    amps[((i + o0) * dims[1] + j + o1) * dims[2] + k + o2] = w * s.amps()[(i * d[1] + j) * d[2] + k];
    };
    embed(a, w1, 0, 0, 0);
    embed(b, w2, a.dims()[0], a.dims()[1], a.dims()[2]);
    return PureState(std::move(dims), std::move(amps), true);
}

LabelTriple predict_product_class(const LabelTriple& a, const LabelTriple& b) {
    return {max_label(a[0], b[0]), max_label(a[1], b[1]), max_label(a[2], b[2])};
}

ConjectureCheck conjecture_check(const PureState& psi, const CriteriaOptions& opts) {
    if (psi.parties() != 3) throw Error("conjecture_check: tripartite state required");
    ConjectureCheck c;
    const DensityOp ab = reduce(psi, {0, 1});
    const DensityOp bc = reduce(psi, {1, 2});
    c.filter_pass = check_reduction(bc, {0}, opts.tol).holds() && check_spectral(ab, {0}, opts).majorization.holds();
    c.reduction_holds = check_reduction(ab, {0}, opts.tol).holds();
    return c;
}

PureState random_pure(const Dims& dims, std::uint64_t seed, std::uint64_t stream) {
    Rng rng = derived_rng(seed, stream);
    return PureState(dims, gaussian_vector(total_dim(dims), rng), true);
}

ConjectureReport conjecture_scan(std::size_t trials, std::uint64_t seed, const CriteriaOptions& opts) {
    if (trials == 0) throw Error("conjecture_scan: trials must be at least 1");
    ConjectureReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const PureState psi = random_pure({3, 3, 3}, seed, t);
        const ConjectureCheck c = conjecture_check(psi, opts);
        if (!c.filter_pass) continue;
        ++rep.filter_hits;
        if (c.reduction_holds) {
            ++rep.reduction_holds;
        } else {
            rep.counterexamples.push_back(psi);
            rep.counterexample_trials.push_back(t);
        }
    }
    return rep;
}

}  // namespace enthier
