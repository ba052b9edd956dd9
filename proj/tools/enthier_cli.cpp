// Command-line front end: classify state files, write named families, run the
// verification suites, form monoid products, replay Petz recovery and run the
// N-party checks.
//
// Exit codes: 0 decisive, 1 usage or parse error, 2 indeterminate result.

#include "enthier/classify.hpp"
#include "enthier/error.hpp"
#include "enthier/families.hpp"
#include "enthier/multipartite.hpp"
#include "enthier/petz.hpp"
#include "enthier/state_file.hpp"
#include "enthier/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace enthier;
using nlohmann::json;

namespace {

constexpr int kDecisive = 0;
constexpr int kUsage = 1;
constexpr int kIndeterminate = 2;

struct Common {
    double tol = kTau;
    std::uint64_t seed = 0;
    std::string json_path;
};

double default_tol() {
    if (const char* env = std::getenv("ENTHIER_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0) return v;
        std::cerr << "warning: ignoring invalid ENTHIER_TOL='" << env << "'\n";
    }
    return kTau;
}

void emit_json(const Common& c, const json& doc) {
    if (c.json_path.empty()) return;
    if (c.json_path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(c.json_path);
    if (!out) throw Error("cannot write " + c.json_path);
    out << doc.dump(2) << "\n";
}

// Text goes to stdout unless the JSON document itself is going there.
std::ostream& text(const Common& c) {
    static std::ostringstream sink;
    if (c.json_path == "-") {
        sink.str({});
        return sink;
    }
    return std::cout;
}

json verdict_json(const Verdict& v) {
    json j{{"criterion", to_string(v.criterion)},
           {"status", to_string(v.status)},
           {"evidence", {{"kind", v.evidence.kind}, {"value", v.evidence.value}}}};
    if (!v.evidence.note.empty()) j["evidence"]["note"] = v.evidence.note;
    if (!v.rule.empty()) j["rule"] = v.rule;
    if (v.certificate_based) j["certificate_based"] = true;
    return j;
}

json pair_json(const BipartiteClass& c) {
    json j{{"label", to_string(c.label)}, {"verdicts", json::array()}};
    for (const Verdict& v : c.justification) j["verdicts"].push_back(verdict_json(v));
    if (c.witness) {
        j["witness"] = {{"kind", to_string(c.witness->kind)}, {"evidence", c.witness->evidence},
                        {"verified", c.witness->verified}};
        if (c.witness->kind == WitnessKind::projection_2x2) {
            j["witness"]["left_pair"] = c.witness->left_pair;
            j["witness"]["right_pair"] = c.witness->right_pair;
            if (c.witness->rotated) {
                j["witness"]["seed"] = c.witness->seed;
                j["witness"]["rotation_index"] = c.witness->rotation_index;
            }
        }
    }
    return j;
}

std::string short_status(const Verdict* v) {
    if (!v) return "-";
    return std::string(to_string(v->status));
}

void print_pair(std::ostream& os, const char* name, const BipartiteClass& c) {
    os << "  " << name << "  " << to_string(c.label);
    const Verdict* sep = c.find(Criterion::separability);
    if (sep && !sep->rule.empty()) os << "  (separability: " << (sep->certificate_based ? "certificate" : sep->rule) << ")";
    os << "\n";
    for (const Verdict& v : c.justification) {
        os << "      " << to_string(v.criterion) << ": " << to_string(v.status) << "  [" << v.evidence.kind << " "
           << v.evidence.value << "]";
        if (!v.evidence.note.empty()) os << "  " << v.evidence.note;
        os << "\n";
    }
    if (c.witness) {
        os << "      witness: " << to_string(c.witness->kind);
        if (c.witness->kind == WitnessKind::projection_2x2)
            os << " left {" << c.witness->left_pair[0] << "," << c.witness->left_pair[1] << "} right {"
               << c.witness->right_pair[0] << "," << c.witness->right_pair[1] << "}"
               << (c.witness->rotated ? " (rotated)" : "");
        os << " evidence " << c.witness->evidence << "\n";
    }
}

std::string headline(const TripleClass& t) {
    std::string s = t.name();
    if (t.certificate_used()) s += " (separability: certificate)";
    return s;
}

int cmd_classify(const Common& c, const std::string& path, bool normalize) {
    const auto t0 = std::chrono::steady_clock::now();
    const StateFile sf = read_state_file(path, normalize);
    if (sf.state.parties() != 3) throw Error("classify: tripartite state required (use `multipartite` for N parties)");
    const Certificate* cert = sf.metadata && sf.metadata->certificate ? &*sf.metadata->certificate : nullptr;
    CriteriaOptions co;
    co.tol = c.tol;
    co.seed = c.seed;
    const TripartiteReport rep = analyze_tripartite(sf.state, cert, co);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::ostream& os = text(c);
    os << headline(rep.cls) << "\n";
    os << "canonical " << triple_name(rep.cls.canonical()) << ", tol " << c.tol << ", seed " << c.seed << "\n";
    const char* names[] = {"AB", "BC", "CA"};
    for (std::size_t k = 0; k < 3; ++k) print_pair(os, names[k], rep.cls.pairs[k]);
    os << "local ranks " << rep.ranks[0] << " " << rep.ranks[1] << " " << rep.ranks[2] << "; tensor rank in ["
       << rep.bounds.lower << ", " << rep.bounds.upper << "] (" << rep.bounds.lower_method << "; "
       << rep.bounds.upper_method << ")\n";
    if (rep.table.contradiction) {
        os << "table: " << rep.cls.name() << " is outside the essential subsets\n";
    } else {
        os << "table: row " << rep.table.row << (rep.table.pass ? " consistent" : " VIOLATED") << "\n";
        for (const auto& ch : rep.table.checks) os << "    " << (ch.pass ? "ok   " : "FAIL ") << ch.relation << "\n";
    }
    os << "time " << ms << " ms\n";

    json doc{{"command", "classify"},
             {"file", path},
             {"tol", c.tol},
             {"seed", c.seed},
             {"triple", rep.cls.name()},
             {"canonical", triple_name(rep.cls.canonical())},
             {"certificate_used", rep.cls.certificate_used()},
             {"pairs", {{"AB", pair_json(rep.cls.pairs[0])}, {"BC", pair_json(rep.cls.pairs[1])}, {"CA", pair_json(rep.cls.pairs[2])}}},
             {"local_ranks", rep.ranks},
             {"rank_bounds", {{"lower", rep.bounds.lower}, {"upper", rep.bounds.upper},
                              {"lower_method", rep.bounds.lower_method}, {"upper_method", rep.bounds.upper_method}}},
             {"table", {{"row", rep.table.row}, {"essential", rep.table.essential}, {"pass", rep.table.pass},
                        {"contradiction", rep.table.contradiction}}},
             {"time_ms", ms}};
    for (const auto& ch : rep.table.checks) doc["table"]["checks"].push_back({{"relation", ch.relation}, {"pass", ch.pass}});
    emit_json(c, doc);
    return rep.cls.decisive() ? kDecisive : kIndeterminate;
}

int cmd_family(const Common& c, const std::string& name, const std::vector<double>& params, const std::string& out) {
    const FamilyState f = make_family(name, params, c.seed);
    const StateMetadata meta{name, f.certificate.params, f.certificate};
    if (out.empty() || out == "-")
        std::cout << serialize_state(f.state, meta);
    else
        write_state_file(out, f.state, meta);
    return kDecisive;
}

int cmd_verify(const Common& c, const std::string& suite, std::size_t trials, const std::string& dump_dir) {
    SuiteOptions o;
    o.trials = trials;
    o.seed = c.seed;
    o.tol = c.tol;
    o.dump_dir = dump_dir;
    const SuiteResult r = run_suite(suite, o);
    std::ostream& os = text(c);
    for (const auto& l : r.lines) os << l << "\n";
    os << r.name << ": " << (r.passed() ? "pass" : "FAIL") << " (" << (r.checks - r.failures) << "/" << r.checks
       << " checks" << (r.gating ? "" : ", non-gating") << ")\n";
    emit_json(c, json{{"command", "verify"}, {"suite", r.name}, {"gating", r.gating}, {"passed", r.passed()},
                      {"checks", r.checks}, {"failures", r.failures}, {"lines", r.lines}, {"tol", c.tol}, {"seed", c.seed}});
    return !r.gating || r.passed() ? kDecisive : kIndeterminate;
}

int cmd_monoid(const Common& c, const std::string& a_path, const std::string& b_path, double w1, const std::string& out,
               bool normalize) {
    const StateFile a = read_state_file(a_path, normalize);
    const StateFile b = read_state_file(b_path, normalize);
    const double w2 = std::sqrt(std::max(0.0, 1.0 - w1 * w1));
    const PureState p = monoid_product(a.state, b.state, w1, w2);
    std::optional<Certificate> cert;
    const Certificate* ca = a.metadata && a.metadata->certificate ? &*a.metadata->certificate : nullptr;
    const Certificate* cb = b.metadata && b.metadata->certificate ? &*b.metadata->certificate : nullptr;
    if (ca && cb) cert = combine_certificates(*ca, *cb);

    CriteriaOptions co;
    co.tol = c.tol;
    co.seed = c.seed;
    const TripartiteReport ra = analyze_tripartite(a.state, ca, co);
    const TripartiteReport rb = analyze_tripartite(b.state, cb, co);
    const TripartiteReport rp = analyze_tripartite(p, cert ? &*cert : nullptr, co);
    const LabelTriple predicted = predict_product_class(ra.cls.raw(), rb.cls.raw());

    std::ostream& os = text(c);
    os << ra.cls.name() << " * " << rb.cls.name() << " -> " << headline(rp.cls) << " (predicted "
       << triple_name(predicted) << (predicted == rp.cls.raw() ? ", match" : ", MISMATCH") << ")\n";
    os << "dims " << p.dims()[0] << "x" << p.dims()[1] << "x" << p.dims()[2] << "; tensor rank in ["
       << rp.bounds.lower << ", " << rp.bounds.upper << "]\n";
    if (!out.empty()) {
        write_state_file(out, p, StateMetadata{"monoid", a_path + " * " + b_path, cert});
        os << "wrote " << out << "\n";
    }
    emit_json(c, json{{"command", "monoid"}, {"left", ra.cls.name()}, {"right", rb.cls.name()},
                      {"product", rp.cls.name()}, {"predicted", triple_name(predicted)},
                      {"match", predicted == rp.cls.raw()}, {"rank_bounds", {rp.bounds.lower, rp.bounds.upper}},
                      {"tol", c.tol}, {"seed", c.seed}});
    return rp.cls.decisive() ? kDecisive : kIndeterminate;
}

// roles "CAB" means A' = C, B' = A, C' = B.
std::array<std::size_t, 3> parse_roles(const std::string& roles) {
    if (roles.size() != 3) throw Error("--roles expects three letters, e.g. ABC or CAB");
    std::array<std::size_t, 3> order{};
    std::array<bool, 3> used{};
    for (std::size_t k = 0; k < 3; ++k) {
        const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(roles[k])));
        if (ch < 'A' || ch > 'C' || used[ch - 'A']) throw Error("--roles must be a permutation of ABC");
        used[ch - 'A'] = true;
        order[k] = static_cast<std::size_t>(ch - 'A');
    }
    return order;
}

int cmd_petz(const Common& c, const std::string& path, const std::string& roles, const std::string& classical,
             bool normalize) {
    const StateFile sf = read_state_file(path, normalize);
    if (sf.state.parties() != 3) throw Error("petz: tripartite state required");
    const auto order = parse_roles(roles);
    const PureState psi = permute_parties(sf.state, order);
    const DensityOp rho_bc = reduce(psi, {1, 2});

    std::optional<SeparableDecomposition> dec;
    std::string why;
    for (std::size_t party : {std::size_t{1}, std::size_t{0}}) {
        if ((classical == "b" && party != 0) || (classical == "c" && party != 1)) continue;
        try {
            dec = cq_decomposition(rho_bc, party, c.tol);
            break;
        } catch (const PreconditionError& e) {
            why = e.what();
        }
    }
    std::ostream& os = text(c);
    const std::string a = std::string(1, static_cast<char>('A' + order[0]));
    const std::string b = std::string(1, static_cast<char>('A' + order[1]));
    const std::string cc = std::string(1, static_cast<char>('A' + order[2]));
    if (!dec) {
        os << "no classical-quantum decomposition of rho_" << b << cc << ": " << why << "\n";
        emit_json(c, json{{"command", "petz"}, {"roles", roles}, {"status", "no_decomposition"}, {"reason", why}});
        return kIndeterminate;
    }
    const double gap = entropy(reduce(psi, {2})) - entropy(rho_bc);
    const DensityOp ext = build_extension(*dec);
    const RecoveryChannel ch = petz_channel(reduce(psi, {2}), partial_trace(ext, {1, 2}), c.tol);
    const double dev = verify_recovery(rho_bc, ch, ext);
    os << "roles A'=" << a << " B'=" << b << " C'=" << cc << "; rho_" << b << cc << " has " << dec->size()
       << " product terms\n";
    os << "H(rho_" << cc << ") - H(rho_" << b << cc << ") = " << gap << " bits; isometry defect "
       << ch.isometry_defect() << "; recovery deviation " << dev << "\n";
    json doc{{"command", "petz"}, {"roles", roles}, {"entropy_gap", gap}, {"recovery_deviation", dev},
             {"isometry_defect", ch.isometry_defect()}, {"tol", c.tol}};
    try {
        const Extraction ex = extract_separable_ab(psi, *dec, c.tol);
        os << "rho_" << a << b << " = sum of " << ex.decomposition.size() << " product terms, rebuild error "
           << ex.rebuild_error << "\n";
        for (std::size_t k = 0; k < ex.decomposition.size(); ++k)
            os << "    p=" << ex.decomposition.weights[k] << " from term " << ex.decomposition.origin[k] << "\n";
        doc["status"] = "separable";
        doc["terms"] = ex.decomposition.size();
        doc["weights"] = ex.decomposition.weights;
        doc["rebuild_error"] = ex.rebuild_error;
        emit_json(c, doc);
        return kDecisive;
    } catch (const PreconditionError& e) {
        os << "refused: " << e.what() << "\n";
        doc["status"] = "refused";
        doc["reason"] = e.what();
        emit_json(c, doc);
        return kIndeterminate;
    }
}

int cmd_multipartite(const Common& c, const std::string& path, std::size_t n, bool normalize) {
    const StateFile sf = read_state_file(path, normalize);
    const PureState& psi = sf.state;
    const std::size_t m = psi.parties();
    if (n == 0) n = m;
    const Theorem11Report t = theorem11_verify(psi, n, c.tol, c.seed);
    std::ostream& os = text(c);
    os << m << " parties, n = " << n << "\n";
    json doc{{"command", "multipartite"}, {"parties", m}, {"n", n}, {"tol", c.tol}, {"reduced", json::array()}};
    for (std::size_t i = 0; i < t.reduced_ppt.size(); ++i) {
        const BipartitionReport& br = t.reduced_ppt[i];
        std::size_t npt = 0;
        for (const auto& v : br.verdicts) npt += v.fails();
        os << "  without party " << i << ": " << br.cuts.size() << " cuts, " << npt << " NPT\n";
        doc["reduced"].push_back({{"traced", i}, {"cuts", br.cuts.size()}, {"npt", npt}});
    }
    os << "(1) " << t.statement1 << "\n";
    os << "(2) all-bipartition PPT: " << to_string(t.statement2) << "\n";
    os << "(3) fully separable: " << to_string(t.statement3) << " (" << t.statement3_rule << ")\n";
    os << "(4) generalized GHZ form: " << (t.statement4 ? "detected" : "not detected")
       << (t.detection.degenerate ? " (degenerate weights)" : "") << "\n";
    if (t.detection.form) {
        os << "    p =";
        for (double p : t.detection.form->p) os << " " << p;
        os << "; residual " << t.detection.form->residual << "\n";
    }
    os << (t.consistent ? "statements agree" : "STATEMENTS DISAGREE") << "\n";
    doc["statement2"] = to_string(t.statement2);
    doc["statement3"] = to_string(t.statement3);
    doc["statement4"] = t.statement4;
    doc["consistent"] = t.consistent;
    if (t.detection.form) doc["weights"] = t.detection.form->p;
    emit_json(c, doc);
    return t.consistent && t.statement3 != Status::unknown ? kDecisive : kIndeterminate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bipartite entanglement hierarchy of tripartite pure states"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Common common;
    common.tol = default_tol();
    app.add_option("--tol", common.tol, "numerical tolerance (default 1e-9 or $ENTHIER_TOL)")->check(CLI::PositiveNumber);
    app.add_option("--seed", common.seed, "seed for every randomized step");
    app.add_option("--json", common.json_path, "also write a JSON report to this path ('-' for stdout only)");
    bool normalize = false;
    app.add_flag("--normalize", normalize, "rescale input states of any nonzero norm");

    std::string in_path, in_path2, out_path, name, suite, dump_dir, roles = "ABC", classical = "any";
    std::vector<double> params;
    std::size_t trials = 0, n = 0;
    double w1 = 0.70710678118654752440;

    auto* classify = app.add_subcommand("classify", "classify a tripartite state file");
    classify->add_option("file", in_path, "state file")->required();

    auto* family = app.add_subcommand("family", "write a named family state");
    family->add_option("name", name, "family name")->required();
    family->add_option("params", params, "numeric parameters");
    family->add_option("-o,--out", out_path, "output file (stdout when omitted)");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "theorem2 | theorem11 | petz | monoid | table1 | conjecture")->required();
    verify->add_option("--trials", trials, "number of random trials (suite default when 0)");
    verify->add_option("--dump-dir", dump_dir, "directory for conjecture counterexample files");

    auto* monoid = app.add_subcommand("monoid", "direct-sum product of two tripartite state files");
    monoid->add_option("left", in_path, "first state file")->required();
    monoid->add_option("right", in_path2, "second state file")->required();
    monoid->add_option("--w1", w1, "weight of the first factor; the second gets sqrt(1 - w1^2)")
        ->check(CLI::Range(0.0, 1.0));
    monoid->add_option("-o,--out", out_path, "write the product state here");

    auto* petz = app.add_subcommand("petz", "replay exact Petz recovery on a tripartite state file");
    petz->add_option("file", in_path, "state file")->required();
    petz->add_option("--roles", roles, "file parties playing A, B, C (e.g. CAB)");
    petz->add_option("--classical", classical, "which party of the B'C' pair is classical: b | c | any")
        ->check(CLI::IsMember({"b", "c", "any"}));

    auto* multi = app.add_subcommand("multipartite", "N-party PPT, separability and GHZ-form checks");
    multi->add_option("file", in_path, "state file")->required();
    multi->add_option("-n", n, "number of parties sharing the GHZ index (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*classify) return cmd_classify(common, in_path, normalize);
        if (*family) return cmd_family(common, name, params, out_path);
        if (*verify) return cmd_verify(common, suite, trials, dump_dir);
        if (*monoid) return cmd_monoid(common, in_path, in_path2, w1, out_path, normalize);
        if (*petz) return cmd_petz(common, in_path, roles, classical, normalize);
        if (*multi) return cmd_multipartite(common, in_path, n, normalize);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
