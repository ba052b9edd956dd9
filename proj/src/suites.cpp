#include "enthier/suites.hpp"

#include "enthier/error.hpp"
#include "enthier/multipartite.hpp"
#include "enthier/petz.hpp"
#include "enthier/random.hpp"
#include "enthier/state_file.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

namespace enthier {

TripartiteReport analyze_tripartite(const PureState& psi, const Certificate* cert, const CriteriaOptions& opts) {
    TripartiteReport rep;
    rep.cls = classify_tripartite(psi, {opts, cert});
    const auto r = local_ranks(psi, opts.tol);
    rep.ranks = {r[0], r[1], r[2]};
    std::optional<std::size_t> known;
    if (cert) known = cert->decomposition_size;
    rep.bounds = tensor_rank_bounds(psi, known, &rep.cls, opts.tol);
    rep.table = check_table_constraints(rep.cls.raw(), rep.bounds, rep.ranks);
    return rep;
}

namespace {

FamilyState product(const FamilyState& a, const FamilyState& b) {
    return {monoid_product(a.state, b.state), combine_certificates(a.certificate, b.certificate)};
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace

std::vector<TableCase> table1_cases(std::uint64_t seed) {
    std::vector<TableCase> cases;
    cases.push_back({"S_SSS", ghz(2)});
    cases.push_back({"S_SSM", ssm(3, 2, seed)});
    cases.push_back({"S_SMM", smm(2, 2, seed)});
    cases.push_back({"S_PMM", pmm_tiles()});
    cases.push_back({"S_DDD", ddd_psi_r(4)});
    cases.push_back({"S_DDM", product(ddd_psi_r(4), ssm(2, 2, seed))});
    cases.push_back({"S_DMM", dmm_psi_a(1.0)});
    cases.push_back({"S_DMM boundary", product(smm(2, 2, seed), ddd_psi_r(4))});
    cases.push_back({"S_MMM", mmm_example1(4)});
    return cases;
}

PureState ghz_form_instance(std::size_t parties, std::size_t n, std::size_t terms, std::uint64_t seed) {
    if (n < 2 || n > parties || terms < 1) throw Error("ghz_form_instance: need 2 <= n <= parties and terms >= 1");
    Rng rng = derived_rng(seed, 0x9f);
    const auto p = random_probabilities(terms, rng);
    CVector amps;
    Dims dims(parties, terms);
    for (std::size_t j = n; j < parties; ++j) dims[j] = 2;
    amps.assign(total_dim(dims), 0.0);
    for (std::size_t i = 0; i < terms; ++i) {
        CVector term{std::sqrt(p[i])};
        for (std::size_t j = 0; j < parties; ++j) {
            CVector v(dims[j]);
            if (j < n)
                v[i] = 1.0;
            else
                v = random_unit_vector(dims[j], rng);
            term = kron(term, v);
        }
        for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += term[k];
    }
    return PureState(std::move(dims), std::move(amps), true);
}

FamilyState random_lemma2(std::uint64_t seed, std::uint64_t index) {
    Rng rng = derived_rng(seed, 0x7000 + index);
    std::uniform_int_distribution<std::size_t> pick(2, 4);
    const std::size_t n = pick(rng), da = pick(rng);
    return lemma2_random(n, da, rng());
}

void SuiteResult::check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) ++failures;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"theorem2", "theorem11", "petz", "monoid", "table1", "conjecture"};
    return names;
}

namespace {

SuiteResult suite_theorem2(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "theorem2";
    CriteriaOptions co;
    co.tol = o.tol;
    co.seed = o.seed;
    const std::size_t trials = o.trials ? o.trials : 200;
    std::size_t agree = 0, applicable = 0, chain = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const FamilyState f = random_lemma2(o.seed, t);
        // The CA pair is separable, so (B, A) with anchor C is covered.
        const InferenceRecord rec = theorem2_infer(f.state, {1, 0}, 2, co);
        applicable += rec.applicable;
        agree += rec.applicable && rec.consistent;
        for (const auto& pair : kPairs) {
            const BipartiteClass c = classify_bipartite(reduce(f.state, {pair[0], pair[1]}), {0}, {}, co);
            chain += hierarchy_consistent(c.justification) && label_consistent(c);
        }
    }
    r.check(applicable == trials, "applicable on " + std::to_string(applicable) + "/" + std::to_string(trials));
    r.check(agree == trials, "conditions agree on " + std::to_string(agree) + "/" + std::to_string(trials));
    r.check(chain == 3 * trials, "hierarchy and labels consistent on " + std::to_string(chain) + "/" +
                                     std::to_string(3 * trials) + " pairs");

    const InferenceRecord g = theorem2_infer(ghz(2).state, {0, 1}, 2, co);
    r.check(g.applicable && g.consistent && g.separability.holds() && g.entropy_equal, "GHZ: separable with equal entropies");
    const InferenceRecord c = theorem2_infer(counterexample_232().state, {0, 1}, 2, co);
    r.check(!c.applicable, "counterexample: NPT anchor pair leaves the inference inapplicable");
    return r;
}

SuiteResult suite_theorem11(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "theorem11";
    for (std::size_t n = 3; n <= 5; ++n)
        for (std::size_t d = 2; d <= 3; ++d) {
            const Theorem11Report t = theorem11_verify(ghz_n(n, d).state, n, o.tol, o.seed);
            r.check(t.consistent && t.statement2 == Status::holds && t.statement3 == Status::holds && t.statement4,
                    "GHZ N=" + std::to_string(n) + " d=" + std::to_string(d) + ": (2), (3), (4) hold");
        }
    for (std::size_t n = 3; n <= 4; ++n) {
        const Theorem11Report t = theorem11_verify(w_state(n), 2, o.tol, o.seed);
        r.check(t.consistent && t.statement2 == Status::fails && t.statement3 == Status::fails && !t.statement4,
                "W N=" + std::to_string(n) + ": (2), (3), (4) fail");
    }
    const std::array<std::array<std::size_t, 2>, 3> shapes{{{3, 2}, {4, 2}, {4, 3}}};
    for (const auto& s : shapes) {
        const PureState psi = ghz_form_instance(s[0], s[1], 2, o.seed + s[0] * 10 + s[1]);
        const Theorem11Report t = theorem11_verify(psi, s[1], o.tol, o.seed);
        const bool not_more = !detect_generalized_ghz(psi, s[1] + 1, o.tol, o.seed).form;
        r.check(t.consistent && t.statement4 && t.statement2 == Status::holds && not_more,
                "form with N=" + std::to_string(s[0]) + ", n=" + std::to_string(s[1]) + " detected at n only");
    }
    return r;
}

SuiteResult suite_petz(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "petz";
    {
        const PureState g = ghz(2).state;
        const auto dec = cq_decomposition(reduce(g, {1, 2}), 1, o.tol);
        const Extraction ex = extract_separable_ab(g, dec, o.tol);
        r.check(ex.recovery_deviation <= 1e-8 && ex.rebuild_error <= 1e-7,
                "GHZ: deviation " + fmt(ex.recovery_deviation) + ", rebuild " + fmt(ex.rebuild_error));
    }
    const std::size_t trials = o.trials ? o.trials : 50;
    std::size_t good = 0;
    double worst_dev = 0.0, worst_rebuild = 0.0;
    const std::array<std::size_t, 3> roles{2, 0, 1};
    for (std::size_t t = 0; t < trials; ++t) {
        const PureState psi = permute_parties(random_lemma2(o.seed, t).state, roles);
        const auto dec = cq_decomposition(reduce(psi, {1, 2}), 1, o.tol);
        const Extraction ex = extract_separable_ab(psi, dec, o.tol);
        worst_dev = std::max(worst_dev, ex.recovery_deviation);
        worst_rebuild = std::max(worst_rebuild, ex.rebuild_error);
        good += ex.recovery_deviation <= 1e-8 && ex.rebuild_error <= 1e-7;
    }
    r.check(good == trials, "random forms: " + std::to_string(good) + "/" + std::to_string(trials) +
                                " exact (worst deviation " + fmt(worst_dev) + ", rebuild " + fmt(worst_rebuild) + ")");

    const std::array<std::size_t, 3> swap{2, 1, 0};
    const PureState c = permute_parties(counterexample_232().state, swap);
    const auto dec = cq_decomposition(reduce(c, {1, 2}), 0, o.tol);
    const double gap = entropy(reduce(c, {2})) - entropy(reduce(c, {1, 2}));
    bool refused = false;
    try {
        extract_separable_ab(c, dec, o.tol);
    } catch (const PreconditionError&) {
        refused = true;
    }
    const DensityOp ext = build_extension(dec);
    const RecoveryChannel ch = petz_channel(reduce(c, {2}), partial_trace(ext, {1, 2}), o.tol);
    const double dev = verify_recovery(reduce(c, {1, 2}), ch, ext);
    r.check(refused && std::abs(gap) > 0.1 && dev > 1e-4,
            "counterexample: gap " + fmt(gap) + " bits, deviation " + fmt(dev) + ", refused");
    return r;
}

SuiteResult suite_monoid(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "monoid";
    CriteriaOptions co;
    co.tol = o.tol;
    co.seed = o.seed;
    auto run = [&](const std::string& label, const FamilyState& a, const FamilyState& b) {
        const FamilyState p = product(a, b);
        const auto ca = analyze_tripartite(a.state, &a.certificate, co).cls.raw();
        const auto cb = analyze_tripartite(b.state, &b.certificate, co).cls.raw();
        const TripartiteReport rp = analyze_tripartite(p.state, &p.certificate, co);
        const LabelTriple want = predict_product_class(ca, cb);
        r.check(rp.cls.raw() == want && rp.table.pass,
                label + ": " + triple_name(ca) + " * " + triple_name(cb) + " -> " + rp.cls.name() + " (predicted " +
                    triple_name(want) + ")");
        return rp;
    };
    const std::uint64_t s = o.seed;
    run("SSM*SMS", ssm(2, 2, s), sms(2, 2, s + 1));
    run("DDD*SSM", ddd_psi_r(4), ssm(2, 2, s));
    const TripartiteReport b = run("DDD*SMM", ddd_psi_r(4), smm(2, 2, s));
    r.check(b.ranks[0] == b.ranks[1] && b.ranks[1] == b.ranks[2] && b.bounds.lower > b.ranks[2],
            "boundary product: r >= " + std::to_string(b.bounds.lower) + " > d = " + std::to_string(b.ranks[2]));
    run("PMM*MSS", pmm_tiles(), mss(2, 2, s));

    auto pool = [&](std::size_t k, std::uint64_t seed) -> FamilyState {
        switch (k % 9) {
            case 0: return ghz(2);
            case 1: return sss();
            case 2: return ssm(3, 2, seed);
            case 3: return sms(2, 2, seed);
            case 4: return mss(3, 3, seed);
            case 5: return counterexample_232();
            case 6: return ddd_psi_r(4);
            case 7: return dmm_psi_a(0.5);
            default: return mmm_example1(3);
        }
    };
    Rng rng = derived_rng(o.seed, 0x303);
    for (std::size_t t = 0; t < 10; ++t) {
        const std::size_t i = rng() % 9, j = rng() % 9;
        run("pair " + std::to_string(t), pool(i, o.seed + t), pool(j, o.seed + 100 + t));
    }
    return r;
}

SuiteResult suite_table1(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "table1";
    CriteriaOptions co;
    co.tol = o.tol;
    co.seed = o.seed;
    for (const TableCase& c : table1_cases(o.seed)) {
        const TripartiteReport rep = analyze_tripartite(c.family.state, &c.family.certificate, co);
        bool witnesses = true;
        for (std::size_t k = 0; k < 3; ++k) {
            const Label l = rep.cls.pairs[k].label;
            if (l != Label::D && l != Label::M) continue;
            const DensityOp rho = reduce(c.family.state, {kPairs[k][0], kPairs[k][1]});
            witnesses = witnesses && witness_search(rho, {0}, WitnessBudget::basis_pairs_only(), o.tol).has_value();
        }
        r.check(rep.cls.raw() == c.family.certificate.claimed && rep.table.pass && witnesses,
                c.name + ": " + rep.cls.name() + ", r in [" + std::to_string(rep.bounds.lower) + ", " +
                    std::to_string(rep.bounds.upper) + "], ranks " + std::to_string(rep.ranks[0]) + "x" +
                    std::to_string(rep.ranks[1]) + "x" + std::to_string(rep.ranks[2]));
    }
    return r;
}

SuiteResult suite_conjecture(const SuiteOptions& o) {
    SuiteResult r;
    r.name = "conjecture";
    r.gating = false;
    CriteriaOptions co;
    co.tol = o.tol;
    const std::size_t trials = o.trials ? o.trials : 1000;
    const ConjectureReport rep = conjecture_scan(trials, o.seed, co);
    r.note("trials " + std::to_string(rep.trials) + ", filter hits " + std::to_string(rep.filter_hits) +
           ", reduction holds " + std::to_string(rep.reduction_holds) + ", counterexamples " +
           std::to_string(rep.counterexamples.size()));
    for (std::size_t k = 0; k < rep.counterexamples.size(); ++k) {
        if (o.dump_dir.empty()) break;
        std::filesystem::create_directories(o.dump_dir);
        const std::string path =
            (std::filesystem::path(o.dump_dir) / ("conjecture_" + std::to_string(rep.counterexample_trials[k]) + ".json"))
                .string();
        write_state_file(path, rep.counterexamples[k],
                         StateMetadata{"conjecture_scan",
                                       "seed=" + std::to_string(o.seed) + ",trial=" +
                                           std::to_string(rep.counterexample_trials[k]),
                                       std::nullopt});
        r.note("wrote " + path);
    }
    return r;
}

}  // namespace

SuiteResult run_suite(std::string_view name, const SuiteOptions& opts) {
    if (name == "theorem2") return suite_theorem2(opts);
    if (name == "theorem11") return suite_theorem11(opts);
    if (name == "petz") return suite_petz(opts);
    if (name == "monoid") return suite_monoid(opts);
    if (name == "table1") return suite_table1(opts);
    if (name == "conjecture") return suite_conjecture(opts);
    throw Error("unknown suite '" + std::string(name) + "'");
}

}  // namespace enthier
