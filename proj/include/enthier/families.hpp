#pragma once

#include "enthier/certificate.hpp"
#include "enthier/linalg.hpp"
#include "enthier/qstate.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Named tripartite (and N-party GHZ) constructions with their certificates.
namespace enthier {

struct FamilyState {
    PureState state;
    Certificate certificate;
};

/// sum_{i<d} |iii> / sqrt(d)
FamilyState ghz(std::size_t d);
/// sum_i sqrt(p_i) |iii>; p is normalized.
FamilyState gen_ghz(const std::vector<double>& p);
/// sum_i |i>|beta_i>|i> with <beta_j|beta_i> = c_ij; c PSD with unit trace.
FamilyState mc_purification(const CMatrix& c);
FamilyState sss();
/// sum_i sqrt(p_i) |i, beta_i, i> with random beta_i in C^{d_b}.
FamilyState ssm(std::size_t d, std::size_t d_b, std::uint64_t seed);
/// ssm with parties A and B exchanged: sum_i sqrt(p_i) |alpha_i, i, i>.
FamilyState sms(std::size_t d, std::size_t d_a, std::uint64_t seed);
/// ssm with parties B and C exchanged: sum_i sqrt(p_i) |i, i, beta_i>.
FamilyState mss(std::size_t d, std::size_t d_c, std::uint64_t seed);
/// Direct sum of ssm(d1, d1) and sms(d2, d2); local ranks d1+d2 on every party.
FamilyState smm(std::size_t d1, std::size_t d2, std::uint64_t seed);
/// Purification of the tiles bound entangled state (3x3x4).
FamilyState pmm_tiles();
/// Symmetric |123> part plus sum_{j=4}^r |jjj>; r >= 4.
FamilyState ddd_psi_r(std::size_t r);
/// 3x3x6 state with reduction-satisfying but distillable AB pair; a != 0.
FamilyState dmm_psi_a(double a);
/// sum_{i=2}^r |iii> + (|1>+|2>)^{x3}, normalized numerically; r >= 2.
FamilyState mmm_example1(std::size_t r);
/// (|000> + |011> + |111>) / sqrt(3)
FamilyState counterexample_232();
/// N-party GHZ of local dimension d.
FamilyState ghz_n(std::size_t n, std::size_t d);
/// sum_i sqrt(p_i) |b_i, i, i>.
FamilyState lemma2_form(const std::vector<double>& p, const std::vector<CVector>& b);
/// lemma2_form with n terms, random p and random b_i in C^{d_a}.
FamilyState lemma2_random(std::size_t n, std::size_t d_a, std::uint64_t seed);

/// Names accepted by make_family.
const std::vector<std::string>& family_names();
/// Dispatch by name with numeric parameters (family defaults when empty).
FamilyState make_family(std::string_view name, const std::vector<double>& params, std::uint64_t seed = 0);

struct ProductVector {
    CVector left;
    CVector right;
    CVector full() const { return kron(left, right); }
};

struct TilesUpb {
    std::vector<ProductVector> vectors;
    DensityOp rho;  ///< (I - sum |v_i><v_i|) / 4
};

TilesUpb tiles_upb();

struct UpbReport {
    bool orthogonal = false;
    double max_overlap = 0.0;
    double best_residual = 0.0;  ///< min over starts of sum_i |<v_i|x,y>|^2
    ProductVector best;
    bool extension_found = false;  ///< best_residual <= 1e-9
    bool unextendible = false;     ///< best_residual > 1e-6 (heuristic evidence)
};

/// Multi-start alternating minimization over product vectors x (x) y.
/// Throws when an input is not a product vector on d_a x d_b.
UpbReport verify_upb(const std::vector<CVector>& vectors, std::size_t d_a, std::size_t d_b, std::size_t starts = 1000,
                     std::uint64_t seed = 0);

}  // namespace enthier
