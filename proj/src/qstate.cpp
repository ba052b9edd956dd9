#include "enthier/qstate.hpp"

#include "enthier/error.hpp"
#include "enthier/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace enthier {

std::size_t total_dim(std::span<const std::size_t> dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
}

namespace {

std::vector<std::size_t> strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
    return s;
}

void check_permutation(std::span<const std::size_t> order, std::size_t n) {
    if (order.size() != n) throw Error("party permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (std::size_t p : order) {
        if (p >= n || seen[p]) throw Error("party permutation is not a permutation");
        seen[p] = true;
    }
}

// new flat index for every old flat index when new party k = old party order[k].
std::vector<std::size_t> permutation_map(std::span<const std::size_t> dims, std::span<const std::size_t> order) {
    const std::size_t n = dims.size();
    Dims nd(n);
    for (std::size_t k = 0; k < n; ++k) nd[k] = dims[order[k]];
    const auto ns = strides(nd);
    // old party j lands at new position pos[j]
    std::vector<std::size_t> pos(n);
    for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
    const std::size_t total = total_dim(dims);
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) idx += digit[j] * ns[pos[j]];
        map[flat] = idx;
        for (std::size_t j = n; j-- > 0;) {
            if (++digit[j] < dims[j]) break;
            digit[j] = 0;
        }
    }
    return map;
}

PartySet complete_order(const PartySet& keep, std::size_t n) {
    if (keep.empty() || keep.size() >= n) throw Error("reduce: keep set must be a nonempty proper subset");
    std::vector<bool> seen(n, false);
    for (std::size_t p : keep) {
        if (p >= n || seen[p]) throw Error("reduce: invalid party in keep set");
        seen[p] = true;
    }
    PartySet order = keep;
    for (std::size_t p = 0; p < n; ++p)
        if (!seen[p]) order.push_back(p);
    return order;
}

Dims dims_of(const Dims& dims, std::span<const std::size_t> parties) {
    Dims out;
    for (std::size_t p : parties) out.push_back(dims[p]);
    return out;
}

}  // namespace

PureState::PureState(Dims dims, CVector amps, bool normalize_amps) : dims_(std::move(dims)), amps_(std::move(amps)) {
    if (dims_.size() < 2) throw Error("PureState: at least two parties required");
    for (std::size_t d : dims_)
        if (d < 1) throw Error("PureState: party dimension must be >= 1");
    if (amps_.size() != total_dim(dims_))
        throw Error("PureState: amplitude count " + std::to_string(amps_.size()) + " does not match dims");
    for (const cplx& z : amps_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error("PureState: non-finite amplitude");
    const double n = norm(amps_);
    if (normalize_amps) {
        if (n == 0.0) throw Error("PureState: zero vector cannot be normalized");
        for (cplx& z : amps_) z /= n;
    } else if (std::abs(n - 1.0) > 1e-9) {
        throw Error("PureState: norm " + std::to_string(n) + " differs from 1");
    }
}

PureState PureState::product(const std::vector<CVector>& factors) {
    Dims dims;
    CVector amps{1.0};
    for (const CVector& f : factors) {
        dims.push_back(f.size());
        amps = kron(amps, f);
    }
    return PureState(std::move(dims), std::move(amps), true);
}

cplx PureState::amplitude(std::span<const std::size_t> idx) const {
    if (idx.size() != dims_.size()) throw Error("amplitude: index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= dims_[k]) throw Error("amplitude: index out of range");
        flat = flat * dims_[k] + idx[k];
    }
    return amps_[flat];
}

DensityOp::DensityOp(Dims dims, CMatrix mat, double tol) : dims_(std::move(dims)), mat_(std::move(mat)) {
    if (dims_.empty()) throw Error("DensityOp: no subsystems");
    if (!mat_.square() || mat_.rows() != total_dim(dims_)) throw Error("DensityOp: matrix size does not match dims");
    if (!is_hermitian(mat_)) throw Error("DensityOp: matrix is not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > 1e-9) throw Error("DensityOp: trace differs from 1");
    if (!is_psd(mat_, tol).psd) throw Error("DensityOp: matrix is not positive semidefinite");
}

DensityOp DensityOp::trusted(Dims dims, CMatrix mat) { return DensityOp(std::move(dims), std::move(mat), 0); }

DensityOp DensityOp::from_pure(const PureState& psi) {
    return trusted(psi.dims(), CMatrix::outer(psi.amps()));
}

PureState permute_parties(const PureState& psi, std::span<const std::size_t> order) {
    check_permutation(order, psi.parties());
    const auto map = permutation_map(psi.dims(), order);
    CVector out(psi.dim());
    for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] = psi.amps()[i];
    return PureState(dims_of(psi.dims(), order), std::move(out), true);
}

DensityOp permute_parties(const DensityOp& rho, std::span<const std::size_t> order) {
    check_permutation(order, rho.parties());
    const auto map = permutation_map(rho.dims(), order);
    const std::size_t n = rho.dim();
    CMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(map[i], map[j]) = rho.matrix()(i, j);
    return DensityOp::trusted(dims_of(rho.dims(), order), std::move(out));
}

DensityOp reduce(const PureState& psi, const PartySet& keep) {
    const PartySet order = complete_order(keep, psi.parties());
    const PureState p = permute_parties(psi, order);
    const Dims kd = dims_of(psi.dims(), keep);
    const std::size_t dk = total_dim(kd);
    const std::size_t dt = psi.dim() / dk;
    const cplx* m = p.amps().data();
    CMatrix rho(dk, dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = i; j < dk; ++j) {
            const cplx v = kernels::dotc(m + j * dt, m + i * dt, dt);
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }
    return DensityOp::trusted(kd, std::move(rho));
}

DensityOp partial_trace(const DensityOp& rho, const PartySet& keep) {
    if (keep.size() == rho.parties()) {
        PartySet sorted = keep;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < sorted.size(); ++k)
            if (sorted[k] != k) throw Error("partial_trace: invalid keep set");
        return permute_parties(rho, keep);
    }
    const PartySet order = complete_order(keep, rho.parties());
    const DensityOp p = permute_parties(rho, order);
    const Dims kd = dims_of(rho.dims(), keep);
    const std::size_t dk = total_dim(kd);
    const std::size_t dt = rho.dim() / dk;
    CMatrix out(dk, dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < dt; ++t) s += p.matrix()(i * dt + t, j * dt + t);
            out(i, j) = s;
        }
    return DensityOp::trusted(kd, std::move(out));
}

CMatrix partial_transpose(const DensityOp& rho, const PartySet& transposed) {
    const Dims& dims = rho.dims();
    const std::size_t n = dims.size();
    std::vector<bool> flip(n, false);
    for (std::size_t p : transposed) {
        if (p >= n) throw Error("partial_transpose: party out of range");
        flip[p] = true;
    }
    const auto st = strides(dims);
    const std::size_t d = rho.dim();
    CMatrix out(d, d);
    std::vector<std::size_t> rd(n), cd(n);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < n; ++k) rd[k] = (r / st[k]) % dims[k];
        for (std::size_t c = 0; c < d; ++c) {
            std::size_t nr = 0, nc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t ck = (c / st[k]) % dims[k];
                cd[k] = ck;
                if (flip[k]) {
                    nr += ck * st[k];
                    nc += rd[k] * st[k];
                } else {
                    nr += rd[k] * st[k];
                    nc += ck * st[k];
                }
            }
            out(nr, nc) = rho.matrix()(r, c);
        }
    }
    return out;
}

DensityOp regroup(const DensityOp& rho, const PartySet& left) {
    const PartySet order = complete_order(left, rho.parties());
    const DensityOp p = permute_parties(rho, order);
    const std::size_t dl = total_dim(dims_of(rho.dims(), left));
    return DensityOp::trusted({dl, rho.dim() / dl}, p.matrix());
}

SchmidtForm schmidt(const PureState& psi, const PartySet& left, double tol) {
    const PartySet order = complete_order(left, psi.parties());
    const PureState p = permute_parties(psi, order);
    const std::size_t dl = total_dim(dims_of(psi.dims(), left));
    const std::size_t dr = psi.dim() / dl;

    SchmidtForm sf;
    sf.left_parties = left;
    sf.right_parties.assign(order.begin() + static_cast<std::ptrdiff_t>(left.size()), order.end());
    sf.dims = psi.dims();

    const DensityOp rl = reduce(psi, left);
    const EigenSystem es = eig_hermitian(rl.matrix());
    const double cut = tol * std::max(1.0, es.values.back());
    for (std::size_t k = es.values.size(); k-- > 0;) {
        if (es.values[k] <= cut) break;
        const double s = std::sqrt(es.values[k]);
        CVector u = es.vectors.column(k);
        CVector v(dr, 0.0);
        for (std::size_t i = 0; i < dl; ++i)
            kernels::axpy(std::conj(u[i]), p.amps().data() + i * dr, v.data(), dr);
        for (cplx& z : v) z /= s;
        sf.coefficients.push_back(s);
        sf.left_basis.push_back(std::move(u));
        sf.right_basis.push_back(std::move(v));
    }
    return sf;
}

PureState SchmidtForm::reconstruct() const {
    PartySet order = left_parties;
    order.insert(order.end(), right_parties.begin(), right_parties.end());
    CVector amps(total_dim(dims), 0.0);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const CVector t = kron(left_basis[k], right_basis[k]);
        kernels::axpy(coefficients[k], t.data(), amps.data(), amps.size());
    }
    const PureState permuted(dims_of(dims, order), std::move(amps), true);
    PartySet inverse(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
    return permute_parties(permuted, inverse);
}

PureState purify(const DensityOp& rho, double tol) {
    const EigenSystem es = eig_hermitian(rho.matrix());
    const double cut = tol * std::max(1.0, es.values.back());
    std::vector<std::size_t> support;
    for (std::size_t k = es.values.size(); k-- > 0;)
        if (es.values[k] > cut) support.push_back(k);
    const std::size_t r = support.size();
    const std::size_t d = rho.dim();
    CVector amps(d * r, 0.0);
    for (std::size_t e = 0; e < r; ++e) {
        const std::size_t k = support[e];
        const double s = std::sqrt(es.values[k]);
        for (std::size_t i = 0; i < d; ++i) amps[i * r + e] = s * es.vectors(i, k);
    }
    Dims dims = rho.dims();
    dims.push_back(r);
    if (dims.size() < 2) throw Error("purify: empty operator");
    return PureState(std::move(dims), std::move(amps), true);
}

std::vector<double> spectrum(const DensityOp& rho) {
    auto vals = eigenvalues_hermitian(rho.matrix());
    for (double& v : vals) v = std::max(v, 0.0);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

double entropy(std::span<const double> spec) {
    double h = 0.0;
    for (double l : spec)
        if (l > 1e-15) h -= l * std::log2(l);
    return std::max(h, 0.0);
}

double entropy(const DensityOp& rho) {
    const auto spec = spectrum(rho);
    return entropy(spec);
}

double rel_entropy(const DensityOp& rho, const DensityOp& sigma, double tol) {
    if (rho.dim() != sigma.dim()) throw Error("rel_entropy: dimension mismatch");
    const EigenSystem es = eig_hermitian(sigma.matrix());
    const double cut = tol * std::max(1.0, es.values.back());
    double cross = 0.0;
    double outside = 0.0;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        const CVector v = es.vectors.column(k);
        const double weight = inner(v, rho.matrix() * v).real();
        if (es.values[k] > cut)
            cross += weight * std::log2(es.values[k]);
        else
            outside += weight;
    }
    if (outside > tol) return std::numeric_limits<double>::infinity();
    return -entropy(rho) - cross;
}

namespace {

std::vector<double> checked_descending(std::span<const double> x, std::size_t len) {
    std::vector<double> v(x.begin(), x.end());
    double s = 0.0;
    for (double& e : v) {
        if (e < -1e-12) throw Error("majorizes: negative entry");
        e = std::max(e, 0.0);
        s += e;
    }
    if (std::abs(s - 1.0) > 1e-8) throw Error("majorizes: entries do not sum to 1");
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize(len, 0.0);
    return v;
}

}  // namespace

bool majorizes(std::span<const double> x, std::span<const double> y) {
    const std::size_t len = std::max(x.size(), y.size());
    const auto a = checked_descending(x, len);
    const auto b = checked_descending(y, len);
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        sa += a[k];
        sb += b[k];
        if (sa < sb - 1e-9) return false;
    }
    return true;
}

double spectral_distance(std::span<const double> x, std::span<const double> y) {
    std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    const std::size_t len = std::max(a.size(), b.size());
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    double d = 0.0;
    for (std::size_t k = 0; k < len; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

std::vector<std::size_t> local_ranks(const PureState& psi, double tol) {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < psi.parties(); ++p) out.push_back(numeric_rank(reduce(psi, {p}).matrix(), tol));
    return out;
}

CVector apply_local(const PureState& psi, std::size_t party, const CMatrix& op) {
    if (party >= psi.parties() || op.cols() != psi.dims()[party])
        throw Error("apply_local: operator does not match party dimension");
    const auto& dims = psi.dims();
    std::size_t outer = 1, inner_dim = 1;
    for (std::size_t k = 0; k < party; ++k) outer *= dims[k];
    for (std::size_t k = party + 1; k < dims.size(); ++k) inner_dim *= dims[k];
    const std::size_t din = dims[party], dout = op.rows();
    CVector out(outer * dout * inner_dim, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t a = 0; a < dout; ++a)
            for (std::size_t b = 0; b < din; ++b) {
                const cplx coef = op(a, b);
                if (coef == cplx(0.0)) continue;
                kernels::axpy(coef, psi.amps().data() + (o * din + b) * inner_dim,
                              out.data() + (o * dout + a) * inner_dim, inner_dim);
            }
    return out;
}

PureState apply_local_unitaries(const PureState& psi, const std::vector<CMatrix>& unitaries) {
    if (unitaries.size() != psi.parties()) throw Error("apply_local_unitaries: one unitary per party required");
    PureState cur = psi;
    for (std::size_t p = 0; p < unitaries.size(); ++p) {
        Dims dims = cur.dims();
        dims[p] = unitaries[p].rows();
        cur = PureState(std::move(dims), apply_local(cur, p, unitaries[p]), true);
    }
    return cur;
}

double fidelity_pure(const PureState& a, const PureState& b) {
    if (a.dims() != b.dims()) throw Error("fidelity_pure: dimension mismatch");
    return std::norm(inner(a.amps(), b.amps()));
}

}  // namespace enthier
