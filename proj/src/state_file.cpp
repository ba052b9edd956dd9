#include "enthier/state_file.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace enthier {

namespace {

using nlohmann::json;

std::string number(double x) {
    if (x == 0.0) return "0";  // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string certificate_json(const Certificate& c) {
    std::string out = "{\"claimed\": " + quoted(triple_name(c.claimed)) + ", \"pair_separable\": [";
    for (std::size_t k = 0; k < 3; ++k) {
        if (k) out += ", ";
        out += c.pair_separable[k] ? (*c.pair_separable[k] ? "true" : "false") : "null";
    }
    out += "], \"decomposition_size\": ";
    out += c.decomposition_size ? std::to_string(*c.decomposition_size) : "null";
    out += ", \"note\": " + quoted(c.note) + "}";
    return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError("state file: " + where + ": " + what);
}

std::size_t as_index(const json& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(where, "expected a non-negative integer");
    const auto x = v.get<long long>();
    if (x < 0) fail(where, "expected a non-negative integer");
    return static_cast<std::size_t>(x);
}

double as_real(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

Certificate parse_certificate(const json& j, const std::string& where, const std::string& family,
                              const std::string& params) {
    if (!j.is_object()) fail(where, "expected an object");
    Certificate c;
    c.family = family;
    c.params = params;
    if (j.contains("claimed")) {
        if (!j["claimed"].is_string()) fail(where + ".claimed", "expected a string");
        const auto t = parse_triple(j["claimed"].get<std::string>());
        if (!t) fail(where + ".claimed", "expected a triple name such as \"S_SSM\"");
        c.claimed = *t;
    }
    if (j.contains("pair_separable")) {
        const json& p = j["pair_separable"];
        if (!p.is_array() || p.size() != 3) fail(where + ".pair_separable", "expected three entries");
        for (std::size_t k = 0; k < 3; ++k) {
            if (p[k].is_null()) continue;
            if (!p[k].is_boolean()) fail(where + ".pair_separable[" + std::to_string(k) + "]", "expected true, false or null");
            c.pair_separable[k] = p[k].get<bool>();
        }
    }
    if (j.contains("decomposition_size") && !j["decomposition_size"].is_null())
        c.decomposition_size = as_index(j["decomposition_size"], where + ".decomposition_size");
    if (j.contains("note")) {
        if (!j["note"].is_string()) fail(where + ".note", "expected a string");
        c.note = j["note"].get<std::string>();
    }
    return c;
}

}  // namespace

std::string serialize_state(const PureState& psi, const std::optional<StateMetadata>& meta) {
    const Dims& dims = psi.dims();
    std::string out = "{\n  \"dims\": [";
    for (std::size_t k = 0; k < dims.size(); ++k) out += (k ? ", " : "") + std::to_string(dims[k]);
    out += "],\n  \"amps\": [";
    bool first = true;
    std::vector<std::size_t> idx(dims.size());
    for (std::size_t flat = 0; flat < psi.dim(); ++flat) {
        const cplx a = psi.amps()[flat];
        if (a.real() == 0.0 && a.imag() == 0.0) continue;
        std::size_t rest = flat;
        for (std::size_t k = dims.size(); k-- > 0;) {
            idx[k] = rest % dims[k];
            rest /= dims[k];
        }
        out += first ? "\n    " : ",\n    ";
        first = false;
        out += "{\"idx\": [";
        for (std::size_t k = 0; k < idx.size(); ++k) out += (k ? ", " : "") + std::to_string(idx[k]);
        out += "], \"re\": " + number(a.real()) + ", \"im\": " + number(a.imag()) + "}";
    }
    out += first ? "]" : "\n  ]";
    if (meta) {
        out += ",\n  \"metadata\": {\"family\": " + quoted(meta->family) + ", \"params\": " + quoted(meta->params);
        if (meta->certificate) out += ", \"certificate\": " + certificate_json(*meta->certificate);
        out += "}";
    }
    out += "\n}\n";
    return out;
}

StateFile parse_state(std::string_view text, bool normalize) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("state file: ") + e.what());
    }
    if (!doc.is_object()) fail("document", "expected an object");
    if (!doc.contains("dims")) fail("document", "missing field \"dims\"");
    if (!doc.contains("amps")) fail("document", "missing field \"amps\"");

    const json& jd = doc["dims"];
    if (!jd.is_array()) fail("dims", "expected an array");
    if (jd.size() < 2) fail("dims", "at least two parties required");
    Dims dims;
    for (std::size_t k = 0; k < jd.size(); ++k) {
        const std::size_t d = as_index(jd[k], "dims[" + std::to_string(k) + "]");
        if (d == 0) fail("dims[" + std::to_string(k) + "]", "dimension must be positive");
        dims.push_back(d);
    }
    const std::size_t total = total_dim(dims);
    if (total > (std::size_t{1} << 24)) fail("dims", "state too large");

    const json& ja = doc["amps"];
    if (!ja.is_array()) fail("amps", "expected an array");
    CVector amps(total);
    std::vector<bool> seen(total, false);
    for (std::size_t n = 0; n < ja.size(); ++n) {
        const std::string where = "amps[" + std::to_string(n) + "]";
        const json& e = ja[n];
        if (!e.is_object()) fail(where, "expected an object");
        for (const char* f : {"idx", "re", "im"})
            if (!e.contains(f)) fail(where, std::string("missing field \"") + f + "\"");
        const json& ji = e["idx"];
        if (!ji.is_array() || ji.size() != dims.size())
            fail(where + ".idx", "expected " + std::to_string(dims.size()) + " indices");
        std::size_t flat = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const std::size_t i = as_index(ji[k], where + ".idx[" + std::to_string(k) + "]");
            if (i >= dims[k]) fail(where + ".idx[" + std::to_string(k) + "]", "index out of range");
            flat = flat * dims[k] + i;
        }
        if (seen[flat]) fail(where + ".idx", "duplicate index");
        seen[flat] = true;
        amps[flat] = cplx(as_real(e["re"], where + ".re"), as_real(e["im"], where + ".im"));
    }

    double n2 = 0.0;
    for (const cplx& a : amps) n2 += std::norm(a);
    const double nrm = std::sqrt(n2);
    if (nrm == 0.0) fail("amps", "state has zero norm");
    StateFile sf;
    if (std::abs(nrm - 1.0) <= 1e-9) {
        sf.state = PureState(dims, std::move(amps));
    } else if (normalize || std::abs(nrm - 1.0) <= 1e-6) {
        sf.state = PureState(dims, std::move(amps), true);
    } else {
        std::ostringstream os;
        os << "norm " << nrm << " differs from 1 by more than 1e-6 (use --normalize)";
        fail("amps", os.str());
    }

    if (doc.contains("metadata") && !doc["metadata"].is_null()) {
        const json& m = doc["metadata"];
        if (!m.is_object()) fail("metadata", "expected an object");
        StateMetadata meta;
        if (m.contains("family")) {
            if (!m["family"].is_string()) fail("metadata.family", "expected a string");
            meta.family = m["family"].get<std::string>();
        }
        if (m.contains("params")) {
            if (!m["params"].is_string()) fail("metadata.params", "expected a string");
            meta.params = m["params"].get<std::string>();
        }
        if (m.contains("certificate") && !m["certificate"].is_null())
            meta.certificate = parse_certificate(m["certificate"], "metadata.certificate", meta.family, meta.params);
        sf.metadata = std::move(meta);
    }
    return sf;
}

StateFile read_state_file(const std::string& path, bool normalize) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("state file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_state(ss.str(), normalize);
}

void write_state_file(const std::string& path, const PureState& psi, const std::optional<StateMetadata>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << serialize_state(psi, meta);
    if (!out) throw Error("write failed for " + path);
}

}  // namespace enthier
