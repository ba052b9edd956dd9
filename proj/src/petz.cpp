#include "enthier/petz.hpp"

#include "enthier/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace enthier {

CMatrix SeparableDecomposition::rebuild() const {
    const std::size_t n = total_dim(dims);
    CMatrix out(n, n);
    for (std::size_t i = 0; i < weights.size(); ++i) out += CMatrix::outer(kron(left[i], right[i])) * cplx(weights[i]);
    return out;
}

void SeparableDecomposition::validate() const {
    if (dims.size() != 2) throw Error("separable decomposition: two parties required");
    if (weights.empty() || left.size() != weights.size() || right.size() != weights.size())
        throw Error("separable decomposition: term lists differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0)) throw Error("separable decomposition: weights must be positive");
        if (left[i].size() != dims[0] || right[i].size() != dims[1])
            throw Error("separable decomposition: factor dimension mismatch");
        if (std::abs(norm(left[i]) - 1.0) > 1e-9 || std::abs(norm(right[i]) - 1.0) > 1e-9)
            throw Error("separable decomposition: factors must be unit vectors");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("separable decomposition: weights must sum to one");
}

SeparableDecomposition cq_decomposition(const DensityOp& rho, std::size_t classical_party, double tol) {
    if (rho.parties() != 2 || classical_party > 1) throw Error("cq_decomposition: bipartite operator required");
    const std::size_t dk = rho.dims()[classical_party];
    const std::size_t dq = rho.dims()[1 - classical_party];
    const EigenSystem es = eig_hermitian(partial_trace(rho, {classical_party}).matrix());

    SeparableDecomposition dec;
    dec.dims = rho.dims();
    CMatrix check(rho.dim(), rho.dim());
    for (std::size_t k = es.values.size(); k-- > 0;) {
        if (es.values[k] <= tol) continue;
        const CVector c = es.vectors.column(k);
        // sigma = (<c| (x) I) rho (|c> (x) I) on the quantum side.
        CMatrix sigma(dq, dq);
        for (std::size_t x = 0; x < dq; ++x)
            for (std::size_t y = 0; y < dq; ++y) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < dk; ++i)
                    for (std::size_t j = 0; j < dk; ++j) {
                        const std::size_t r = classical_party == 0 ? i * dq + x : x * dk + i;
                        const std::size_t col = classical_party == 0 ? j * dq + y : y * dk + j;
                        s += std::conj(c[i]) * rho.matrix()(r, col) * c[j];
                    }
                sigma(x, y) = s;
            }
        const EigenSystem se = eig_hermitian(sigma);
        for (std::size_t q = se.values.size(); q-- > 0;) {
            if (se.values[q] <= tol * tol) continue;
            const CVector v = se.vectors.column(q);
            dec.weights.push_back(se.values[q]);
            dec.left.push_back(classical_party == 0 ? c : v);
            dec.right.push_back(classical_party == 0 ? v : c);
            check += CMatrix::outer(kron(dec.left.back(), dec.right.back())) * cplx(se.values[q]);
        }
    }
    if ((check - rho.matrix()).frobenius_norm() > 1e-8)
        throw PreconditionError("cq_decomposition: operator is not block diagonal in the eigenbasis of the classical party");
    const double total = std::accumulate(dec.weights.begin(), dec.weights.end(), 0.0);
    for (double& w : dec.weights) w /= total;
    return dec;
}

DensityOp build_extension(const SeparableDecomposition& dec) {
    dec.validate();
    const std::size_t n = dec.size();
    Dims dims{dec.dims[0], dec.dims[1], n};
    CMatrix m(total_dim(dims), total_dim(dims));
    for (std::size_t i = 0; i < n; ++i) {
        CVector e(n);
        e[i] = 1.0;
        m += CMatrix::outer(kron(kron(dec.left[i], dec.right[i]), e)) * cplx(dec.weights[i]);
    }
    return DensityOp::trusted(std::move(dims), std::move(m));
}

CMatrix RecoveryChannel::apply(const CMatrix& sigma) const {
    if (sigma.rows() != dim_c || sigma.cols() != dim_c) throw Error("RecoveryChannel::apply: dimension mismatch");
    const CMatrix full = isometry * sigma * isometry.adjoint();
    return partial_trace(DensityOp::trusted({dim_c, dim_d, dim_e}, full), {0, 1}).matrix();
}

DensityOp RecoveryChannel::apply_last(const DensityOp& rho) const {
    if (rho.dims().back() != dim_c) throw Error("RecoveryChannel::apply_last: last party dimension mismatch");
    const std::size_t rest = rho.dim() / dim_c;
    const CMatrix u = kron(CMatrix::identity(rest), isometry);
    Dims dims(rho.dims().begin(), rho.dims().end() - 1);
    dims.push_back(dim_c);
    dims.push_back(dim_d);
    dims.push_back(dim_e);
    PartySet keep(dims.size() - 1);
    std::iota(keep.begin(), keep.end(), 0);
    const DensityOp full = DensityOp::trusted(dims, u * rho.matrix() * u.adjoint());
    return partial_trace(full, keep);
}

double RecoveryChannel::isometry_defect() const {
    return (isometry.adjoint() * isometry - CMatrix::identity(dim_c)).max_abs();
}

RecoveryChannel petz_channel(const DensityOp& rho_c, const DensityOp& rho_cd, double tol) {
    if (rho_cd.parties() != 2) throw Error("petz_channel: rho_CD must be bipartite");
    const std::size_t dc = rho_cd.dims()[0], dd = rho_cd.dims()[1];
    if (rho_c.dim() != dc) throw Error("petz_channel: rho_C dimension does not match rho_CD");
    const double mismatch = (partial_trace(rho_cd, {0}).matrix() - rho_c.matrix()).max_abs();
    if (mismatch > 1e-8) {
        std::ostringstream os;
        os << "petz_channel: tr_D rho_CD differs from rho_C by " << mismatch;
        throw PreconditionError(os.str());
    }

    const CMatrix sqrt_cd = fn_on_support(rho_cd.matrix(), [](double x) { return std::sqrt(x); }, tol);
    const CMatrix inv_sqrt_c = fn_on_support(rho_c.matrix(), [](double x) { return 1.0 / std::sqrt(x); }, tol);

    const EigenSystem es = eig_hermitian(rho_c.matrix());
    const double cut = tol * std::max(1.0, es.values.back());
    std::vector<CVector> kernel;
    for (std::size_t k = 0; k < es.values.size(); ++k)
        if (es.values[k] <= cut) kernel.push_back(es.vectors.column(k));

    RecoveryChannel ch;
    ch.dim_c = dc;
    ch.dim_d = dd;
    ch.dim_e = dd + (kernel.empty() ? 0 : 1);
    ch.isometry = CMatrix(dc * dd * ch.dim_e, dc);
    // K_d = rho_CD^{1/2} (rho_C^{-1/2} (x) |d>), stored as U = sum_d K_d (x) |d>_E.
    for (std::size_t d = 0; d < dd; ++d) {
        CMatrix embed(dc * dd, dc);
        for (std::size_t c = 0; c < dc; ++c)
            for (std::size_t c2 = 0; c2 < dc; ++c2) embed(c * dd + d, c2) = inv_sqrt_c(c, c2);
        const CMatrix kd = sqrt_cd * embed;
        for (std::size_t r = 0; r < dc * dd; ++r)
            for (std::size_t c = 0; c < dc; ++c) ch.isometry(r * ch.dim_e + d, c) = kd(r, c);
    }
    // Kernel vectors go to |q>_C |0>_D |extra>_E.
    for (const CVector& q : kernel)
        for (std::size_t c = 0; c < dc; ++c)
            for (std::size_t c2 = 0; c2 < dc; ++c2)
                ch.isometry((c * dd) * ch.dim_e + dd, c2) += q[c] * std::conj(q[c2]);
    return ch;
}

double verify_recovery(const DensityOp& rho_bc, const RecoveryChannel& ch, const DensityOp& rho_bcd) {
    const DensityOp out = ch.apply_last(rho_bc);
    if (out.dim() != rho_bcd.dim()) throw Error("verify_recovery: dimension mismatch");
    return (out.matrix() - rho_bcd.matrix()).frobenius_norm();
}

Extraction extract_separable_ab(const PureState& psi, const SeparableDecomposition& dec_bc, double tol) {
    if (psi.parties() != 3) throw Error("extract_separable_ab: tripartite state required");
    dec_bc.validate();
    const std::size_t da = psi.dims()[0], db = psi.dims()[1], dc = psi.dims()[2];
    if (dec_bc.dims[0] != db || dec_bc.dims[1] != dc) throw Error("extract_separable_ab: decomposition dims differ from B, C");

    const DensityOp rho_bc = reduce(psi, {1, 2});
    if ((dec_bc.rebuild() - rho_bc.matrix()).frobenius_norm() > 1e-8)
        throw PreconditionError("extract_separable_ab: decomposition does not rebuild rho_BC");

    Extraction ex;
    const DensityOp rho_c = reduce(psi, {2});
    ex.entropy_gap = entropy(rho_c) - entropy(rho_bc);
    if (std::abs(ex.entropy_gap) > 1e-8) {
        std::ostringstream os;
        os << "extract_separable_ab: H(rho_C) - H(rho_BC) = " << ex.entropy_gap
           << " bits; recovery is inexact (see verify_recovery)";
        throw PreconditionError(os.str());
    }

    const DensityOp rho_bcd = build_extension(dec_bc);
    const DensityOp rho_cd = partial_trace(rho_bcd, {1, 2});
    const RecoveryChannel ch = petz_channel(rho_c, rho_cd, tol);
    ex.recovery_deviation = verify_recovery(rho_bc, ch, rho_bcd);

    // Phi = (I_AB (x) U) psi on A, B, C, D, E.
    const std::size_t n = ch.dim_d, de = ch.dim_e;
    const std::size_t out_c = dc * n * de;
    CVector phi(da * db * out_c);
    for (std::size_t ab = 0; ab < da * db; ++ab)
        for (std::size_t r = 0; r < out_c; ++r) {
            cplx s = 0.0;
            for (std::size_t c = 0; c < dc; ++c) s += ch.isometry(r, c) * psi.amps()[ab * dc + c];
            phi[ab * out_c + r] = s;
        }

    SeparableDecomposition& dec = ex.decomposition;
    dec.dims = {da, db};
    for (std::size_t i = 0; i < n; ++i) {
        // Branch D = i, reordered as A, B, (C E).
        CVector branch(da * db * dc * de);
        for (std::size_t ab = 0; ab < da * db; ++ab)
            for (std::size_t c = 0; c < dc; ++c)
                for (std::size_t e = 0; e < de; ++e)
                    branch[(ab * dc + c) * de + e] = phi[ab * out_c + (c * n + i) * de + e];
        const double w = norm(branch);
        ex.branch_weights.push_back(w * w);
        if (w * w <= 1e-14) continue;
        const PureState b(Dims{da, db, dc * de}, branch, true);
        const EigenSystem eb = eig_hermitian(reduce(b, {1}).matrix());
        if (eb.values.back() < 1.0 - 1e-7)
            throw Error("extract_separable_ab: B conditional state is not pure; recovery failed");
        const CVector phi_b = eb.vectors.column(db - 1);
        const EigenSystem ea = eig_hermitian(reduce(b, {0}).matrix());
        for (std::size_t k = ea.values.size(); k-- > 0;) {
            if (ea.values[k] <= 1e-14) continue;
            dec.weights.push_back(w * w * ea.values[k]);
            dec.left.push_back(ea.vectors.column(k));
            dec.right.push_back(phi_b);
            dec.origin.push_back(i);
        }
    }
    const double total = std::accumulate(dec.weights.begin(), dec.weights.end(), 0.0);
    for (double& x : dec.weights) x /= total;
    ex.rebuild_error = (dec.rebuild() - reduce(psi, {0, 1}).matrix()).frobenius_norm();
    return ex;
}

}  // namespace enthier
