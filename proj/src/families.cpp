#include "enthier/families.hpp"

#include "enthier/classify.hpp"
#include "enthier/error.hpp"
#include "enthier/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace enthier {

namespace {

using L = Label;

Certificate cert(std::string family, std::string params, LabelTriple claimed, std::optional<std::size_t> terms,
                 std::string note = {}) {
    Certificate c;
    c.family = std::move(family);
    c.params = std::move(params);
    c.claimed = claimed;
    c.decomposition_size = terms;
    c.note = std::move(note);
    return c;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::size_t index3(const Dims& d, std::size_t i, std::size_t j, std::size_t k) { return (i * d[1] + j) * d[2] + k; }

bool has_off_diagonal(const CMatrix& c) {
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (i != j && std::abs(c(i, j)) > 1e-8) return true;
    return false;
}

std::size_t as_count(double x, const char* what) {
    if (!(x >= 0.0) || x != std::floor(x) || x > 1e6)
        throw Error(std::string("family parameter ") + what + " must be a non-negative integer");
    return static_cast<std::size_t>(x);
}

}  // namespace

FamilyState ghz(std::size_t d) {
    if (d < 2) throw Error("ghz: local dimension must be at least 2");
    FamilyState f = gen_ghz(std::vector<double>(d, 1.0 / static_cast<double>(d)));
    f.certificate.family = "ghz";
    f.certificate.params = "d=" + std::to_string(d);
    return f;
}

FamilyState gen_ghz(const std::vector<double>& p) {
    if (p.size() < 2) throw Error("gen_ghz: need at least two weights");
    double total = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw Error("gen_ghz: weights must be positive");
        total += x;
    }
    const std::size_t d = p.size();
    Dims dims{d, d, d};
    CVector amps(d * d * d);
    for (std::size_t i = 0; i < d; ++i) amps[index3(dims, i, i, i)] = std::sqrt(p[i] / total);
    return {PureState(dims, amps, true), cert("gen_ghz", join(p), {L::S, L::S, L::S}, d)};
}

FamilyState mc_purification(const CMatrix& c) {
    if (!c.square() || c.rows() < 2) throw Error("mc_purification: square coefficient matrix of size >= 2 required");
    if (!is_hermitian(c)) throw Error("mc_purification: coefficient matrix must be Hermitian");
    if (std::abs(c.trace().real() - 1.0) > 1e-9) throw Error("mc_purification: coefficient matrix must have unit trace");
    const EigenSystem es = eig_hermitian(c);
    if (es.values.front() < -1e-12) throw Error("mc_purification: coefficient matrix must be positive semidefinite");
    const std::size_t n = c.rows();
    Dims dims{n, n, n};
    CVector amps(n * n * n);
    // beta_i = sum_k sqrt(lambda_k) V_ik |k>, so <beta_j|beta_i> = (V Lambda V^dag)_ij.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            amps[index3(dims, i, k, i)] = std::sqrt(std::max(0.0, es.values[k])) * es.vectors(i, k);
    const LabelTriple claimed = has_off_diagonal(c) ? LabelTriple{L::S, L::S, L::M} : LabelTriple{L::S, L::S, L::S};
    return {PureState(dims, amps, true), cert("mc_purification", "n=" + std::to_string(n), claimed, n)};
}

FamilyState sss() {
    FamilyState f = gen_ghz({0.5, 1.0 / 3.0, 1.0 / 6.0});
    f.certificate.family = "sss";
    return f;
}

FamilyState ssm(std::size_t d, std::size_t d_b, std::uint64_t seed) {
    if (d < 2 || d_b < 1 || d_b > d) throw Error("ssm: need d >= 2 and 1 <= d_b <= d");
    Rng rng = derived_rng(seed, 0x55d);
    const auto p = random_probabilities(d, rng);
    Dims dims{d, d_b, d};
    CVector amps(d * d_b * d);
    for (std::size_t i = 0; i < d; ++i) {
        const CVector beta = random_unit_vector(d_b, rng);
        for (std::size_t j = 0; j < d_b; ++j) amps[index3(dims, i, j, i)] = std::sqrt(p[i]) * beta[j];
    }
    const LabelTriple claimed = d_b == 1 ? LabelTriple{L::S, L::S, L::S} : LabelTriple{L::S, L::S, L::M};
    return {PureState(dims, amps, true),
            cert("ssm", "d=" + std::to_string(d) + ",d_b=" + std::to_string(d_b) + ",seed=" + std::to_string(seed),
                 claimed, d)};
}

FamilyState sms(std::size_t d, std::size_t d_a, std::uint64_t seed) {
    FamilyState f = ssm(d, d_a, seed);
    const std::array<std::size_t, 3> order{1, 0, 2};
    f.state = permute_parties(f.state, order);
    f.certificate = permute_certificate(f.certificate, order);
    f.certificate.family = "sms";
    return f;
}

FamilyState mss(std::size_t d, std::size_t d_c, std::uint64_t seed) {
    FamilyState f = ssm(d, d_c, seed);
    const std::array<std::size_t, 3> order{0, 2, 1};
    f.state = permute_parties(f.state, order);
    f.certificate = permute_certificate(f.certificate, order);
    f.certificate.family = "mss";
    return f;
}

FamilyState smm(std::size_t d1, std::size_t d2, std::uint64_t seed) {
    const FamilyState a = ssm(d1, d1, seed);
    const FamilyState b = sms(d2, d2, seed + 1);
    FamilyState f{monoid_product(a.state, b.state), combine_certificates(a.certificate, b.certificate)};
    f.certificate.family = "smm";
    f.certificate.params = "d1=" + std::to_string(d1) + ",d2=" + std::to_string(d2) + ",seed=" + std::to_string(seed);
    return f;
}

TilesUpb tiles_upb() {
    const double s = 1.0 / std::sqrt(2.0), t = 1.0 / std::sqrt(3.0);
    TilesUpb out;
    out.vectors = {
        {{1, 0, 0}, {s, -s, 0}},
        {{s, -s, 0}, {0, 0, 1}},
        {{0, 0, 1}, {0, s, -s}},
        {{0, s, -s}, {1, 0, 0}},
        {{t, t, t}, {t, t, t}},
    };
    CMatrix m = CMatrix::identity(9);
    for (const auto& v : out.vectors) m -= CMatrix::outer(v.full());
    m *= 0.25;
    out.rho = DensityOp({3, 3}, std::move(m));
    return out;
}

FamilyState pmm_tiles() {
    const TilesUpb t = tiles_upb();
    Certificate c = cert("pmm_tiles", "", {L::P, L::M, L::M}, std::nullopt,
                         "AB is the complement of an unextendible product basis");
    c.pair_separable[0] = false;
    return {purify(t.rho), c};
}

FamilyState ddd_psi_r(std::size_t r) {
    if (r < 4) throw Error("ddd_psi_r: r must be at least 4");
    Dims dims{r, r, r};
    CVector amps(r * r * r);
    const double a = 1.0 / std::sqrt(2.0 * static_cast<double>(r));
    const double b = 1.0 / std::sqrt(static_cast<double>(r));
    std::array<std::size_t, 3> perm{0, 1, 2};
    do {
        amps[index3(dims, perm[0], perm[1], perm[2])] = a;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (std::size_t j = 3; j < r; ++j) amps[index3(dims, j, j, j)] = b;
    // The symmetrized |123> part expands into four product terms.
    return {PureState(dims, amps, true),
            cert("ddd_psi_r", "r=" + std::to_string(r), {L::D, L::D, L::D}, r + 1)};
}

FamilyState dmm_psi_a(double a) {
    if (!std::isfinite(a) || a == 0.0) throw Error("dmm_psi_a: a must be a finite nonzero real (a = 0 drops the sixth C level)");
    Dims dims{3, 3, 6};
    CVector amps(54);
    auto put = [&](std::size_t i, std::size_t j, std::size_t k, double v) { amps[index3(dims, i, j, k)] += v; };
    put(0, 1, 2, 1.0);
    put(1, 2, 0, 1.0);
    put(2, 0, 1, 1.0);
    put(1, 0, 2, 1.0);
    put(1, 0, 5, a);
    put(0, 2, 1, 1.0);
    put(0, 2, 4, a);
    put(2, 1, 0, 1.0);
    put(2, 1, 3, a);
    std::ostringstream os;
    os.precision(17);
    os << "a=" << a;
    return {PureState(dims, amps, true), cert("dmm_psi_a", os.str(), {L::D, L::M, L::M}, 6)};
}

FamilyState mmm_example1(std::size_t r) {
    if (r < 2) throw Error("mmm_example1: r must be at least 2");
    Dims dims{r, r, r};
    CVector amps(r * r * r);
    for (std::size_t i = 1; i < r; ++i) amps[index3(dims, i, i, i)] += 1.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) amps[index3(dims, i, j, k)] += 1.0;
    return {PureState(dims, amps, true), cert("mmm_example1", "r=" + std::to_string(r), {L::M, L::M, L::M}, r)};
}

FamilyState counterexample_232() {
    Dims dims{2, 2, 2};
    CVector amps(8);
    amps[index3(dims, 0, 0, 0)] = 1.0;
    amps[index3(dims, 0, 1, 1)] = 1.0;
    amps[index3(dims, 1, 1, 1)] = 1.0;
    return {PureState(dims, amps, true), cert("counterexample_232", "", {L::S, L::M, L::S}, 3)};
}

FamilyState ghz_n(std::size_t n, std::size_t d) {
    if (n < 2 || n > 16) throw Error("ghz_n: number of parties must be in [2, 16]");
    if (d < 2) throw Error("ghz_n: local dimension must be at least 2");
    Dims dims(n, d);
    CVector amps(total_dim(dims));
    std::size_t stride = 0;
    for (std::size_t k = 0; k < n; ++k) stride = stride * d + 1;
    for (std::size_t i = 0; i < d; ++i) amps[i * stride] = 1.0;
    Certificate c = cert("ghz_n", "n=" + std::to_string(n) + ",d=" + std::to_string(d), {L::S, L::S, L::S}, d);
    if (n != 3) c.claimed = {L::Indeterminate, L::Indeterminate, L::Indeterminate};
    return {PureState(dims, amps, true), c};
}

FamilyState lemma2_form(const std::vector<double>& p, const std::vector<CVector>& b) {
    if (p.size() < 2 || p.size() != b.size()) throw Error("lemma2_form: need matching p and b with at least two terms");
    const std::size_t n = p.size(), da = b.front().size();
    if (da == 0) throw Error("lemma2_form: b vectors must be nonempty");
    double total = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw Error("lemma2_form: weights must be positive");
        total += x;
    }
    Dims dims{da, n, n};
    CVector amps(da * n * n);
    CMatrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (b[i].size() != da) throw Error("lemma2_form: b vectors must share one dimension");
        const double nb = norm(b[i]);
        if (nb < 1e-12) throw Error("lemma2_form: b vectors must be nonzero");
        for (std::size_t k = 0; k < da; ++k) amps[index3(dims, k, i, i)] = std::sqrt(p[i] / total) * b[i][k] / nb;
        for (std::size_t j = 0; j < n; ++j) gram(i, j) = inner(b[i], b[j]) / (nb * norm(b[j]));
    }
    const LabelTriple claimed = has_off_diagonal(gram) ? LabelTriple{L::S, L::M, L::S} : LabelTriple{L::S, L::S, L::S};
    return {PureState(dims, amps, true), cert("lemma2_form", "n=" + std::to_string(n), claimed, n)};
}

FamilyState lemma2_random(std::size_t n, std::size_t d_a, std::uint64_t seed) {
    if (n < 2 || d_a < 1) throw Error("lemma2_random: need n >= 2 and d_a >= 1");
    Rng rng = derived_rng(seed, 0x1e2);
    const auto p = random_probabilities(n, rng);
    std::vector<CVector> b;
    for (std::size_t i = 0; i < n; ++i) b.push_back(random_unit_vector(d_a, rng));
    return lemma2_form(p, b);
}

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names{
        "ghz",          "gen_ghz",      "mc_purification", "sss",   "ssm",     "sms",         "mss",
        "smm",          "pmm_tiles",    "ddd_psi_r",       "dmm_psi_a", "mmm_example1", "counterexample_232",
        "ghz_n",        "lemma2_form",
    };
    return names;
}

FamilyState make_family(std::string_view name, const std::vector<double>& params, std::uint64_t seed) {
    auto arg = [&](std::size_t k, double fallback) { return k < params.size() ? params[k] : fallback; };
    auto expect_at_most = [&](std::size_t n) {
        if (params.size() > n)
            throw Error(std::string(name) + ": expected at most " + std::to_string(n) + " parameters");
    };
    if (name == "ghz") {
        expect_at_most(1);
        return ghz(as_count(arg(0, 2), "d"));
    }
    if (name == "gen_ghz") return gen_ghz(params.empty() ? std::vector<double>{0.5, 0.5} : params);
    if (name == "mc_purification") {
        // Real symmetric coefficient matrix, row-major; a seeded random one by default.
        if (params.empty()) {
            Rng rng = derived_rng(seed, 0x3c);
            CMatrix g(3, 3, gaussian_vector(9, rng));
            CMatrix c = g * g.adjoint();
            c *= 1.0 / c.trace().real();
            return mc_purification(c);
        }
        const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(params.size()))));
        if (n * n != params.size()) throw Error("mc_purification: expected n*n matrix entries");
        CMatrix c(n, n);
        for (std::size_t i = 0; i < n * n; ++i) c.entries()[i] = params[i];
        return mc_purification(c);
    }
    if (name == "sss") {
        expect_at_most(0);
        return sss();
    }
    if (name == "ssm" || name == "sms" || name == "mss") {
        expect_at_most(2);
        const std::size_t d = as_count(arg(0, 3), "d");
        const std::size_t e = as_count(arg(1, 2), "d_b");
        return name == "ssm" ? ssm(d, e, seed) : name == "sms" ? sms(d, e, seed) : mss(d, e, seed);
    }
    if (name == "smm") {
        expect_at_most(2);
        return smm(as_count(arg(0, 2), "d1"), as_count(arg(1, 2), "d2"), seed);
    }
    if (name == "pmm_tiles") {
        expect_at_most(0);
        return pmm_tiles();
    }
    if (name == "ddd_psi_r") {
        expect_at_most(1);
        return ddd_psi_r(as_count(arg(0, 4), "r"));
    }
    if (name == "dmm_psi_a") {
        expect_at_most(1);
        return dmm_psi_a(arg(0, 1.0));
    }
    if (name == "mmm_example1") {
        expect_at_most(1);
        return mmm_example1(as_count(arg(0, 4), "r"));
    }
    if (name == "counterexample_232") {
        expect_at_most(0);
        return counterexample_232();
    }
    if (name == "ghz_n") {
        expect_at_most(2);
        return ghz_n(as_count(arg(0, 3), "n"), as_count(arg(1, 2), "d"));
    }
    if (name == "lemma2_form") {
        expect_at_most(2);
        return lemma2_random(as_count(arg(0, 3), "n"), as_count(arg(1, 2), "d_a"), seed);
    }
    std::string msg = "unknown family '" + std::string(name) + "'; available:";
    for (const auto& n : family_names()) msg += " " + n;
    throw Error(msg);
}

UpbReport verify_upb(const std::vector<CVector>& vectors, std::size_t d_a, std::size_t d_b, std::size_t starts,
                     std::uint64_t seed) {
    if (d_a == 0 || d_b == 0) throw Error("verify_upb: local dimensions must be positive");
    // Factor every input through its Schmidt decomposition.
    std::vector<ProductVector> factors;
    for (const CVector& v : vectors) {
        if (v.size() != d_a * d_b) throw Error("verify_upb: vector dimension does not match d_a * d_b");
        const PureState s(Dims{d_a, d_b}, v, true);
        const SchmidtForm f = schmidt(s, {0});
        if (f.coefficients.size() != 1) throw Error("verify_upb: input is not a product vector");
        factors.push_back({f.left_basis[0], f.right_basis[0]});
    }

    UpbReport rep;
    rep.orthogonal = true;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            const double o = std::abs(inner(vectors[i], vectors[j])) / (norm(vectors[i]) * norm(vectors[j]));
            rep.max_overlap = std::max(rep.max_overlap, o);
        }
    rep.orthogonal = rep.max_overlap <= 1e-12;

    auto residual = [&](const CVector& x, const CVector& y) {
        double r = 0.0;
        for (const auto& f : factors) r += std::norm(inner(f.left, x)) * std::norm(inner(f.right, y));
        return r;
    };
    // Smallest-eigenvalue direction of sum_i w_i |u_i><u_i|.
    auto minimize = [](const std::vector<const CVector*>& u, const std::vector<double>& w, std::size_t dim) {
        CMatrix m(dim, dim);
        for (std::size_t i = 0; i < u.size(); ++i) m += CMatrix::outer(*u[i]) * cplx(w[i]);
        return eig_hermitian(m).vectors.column(0);
    };

    rep.best_residual = std::numeric_limits<double>::infinity();
    std::vector<const CVector*> lefts, rights;
    for (const auto& f : factors) {
        lefts.push_back(&f.left);
        rights.push_back(&f.right);
    }
    for (std::size_t s = 0; s < std::max<std::size_t>(starts, 1); ++s) {
        Rng rng = derived_rng(seed, s);
        CVector y = random_unit_vector(d_b, rng);
        CVector x(d_a);
        double prev = std::numeric_limits<double>::infinity(), cur = prev;
        for (int it = 0; it < 200; ++it) {
            std::vector<double> w;
            for (const auto& f : factors) w.push_back(std::norm(inner(f.right, y)));
            x = minimize(lefts, w, d_a);
            w.clear();
            for (const auto& f : factors) w.push_back(std::norm(inner(f.left, x)));
            y = minimize(rights, w, d_b);
            cur = residual(x, y);
            if (cur < 1e-15 || prev - cur < 1e-14) break;
            prev = cur;
        }
        if (cur < rep.best_residual) {
            rep.best_residual = cur;
            rep.best = {x, y};
        }
        if (rep.best_residual <= 1e-12) break;
    }
    rep.extension_found = rep.best_residual <= 1e-9;
    rep.unextendible = rep.best_residual > 1e-6;
    return rep;
}

}  // namespace enthier
