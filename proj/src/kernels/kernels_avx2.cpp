// Built with -mavx2 -mfma; only reached through the dispatch table after a
// CPU feature check.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace enthier::kernels::detail {

namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (ar + i ai) * v for both lanes.
inline __m256d cmul(__m256d ar, __m256d ai, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(v, ar, _mm256_mul_pd(swapped, ai));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(ar, ai, load2(x + i))));
    for (; i < n; ++i) y[i] += a * x[i];
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
    __m256d direct = _mm256_setzero_pd();
    __m256d crossed = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        direct = _mm256_fmadd_pd(xv, yv, direct);                             // xr*yr, xi*yi
        crossed = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), crossed);  // xr*yi, xi*yr
    }
    alignas(32) double c[4];
    _mm256_store_pd(c, crossed);
    double re = hsum(direct);
    double im = (c[0] - c[1]) + (c[2] - c[3]);
    for (; i < n; ++i) {
        const cplx t = std::conj(x[i]) * y[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

void rot2_avx2(cplx* x, cplx* y, std::size_t n, const cplx* u) {
    const __m256d u0r = _mm256_set1_pd(u[0].real()), u0i = _mm256_set1_pd(u[0].imag());
    const __m256d u1r = _mm256_set1_pd(u[1].real()), u1i = _mm256_set1_pd(u[1].imag());
    const __m256d u2r = _mm256_set1_pd(u[2].real()), u2i = _mm256_set1_pd(u[2].imag());
    const __m256d u3r = _mm256_set1_pd(u[3].real()), u3i = _mm256_set1_pd(u[3].imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        store2(x + i, _mm256_add_pd(cmul(u0r, u0i, xv), cmul(u1r, u1i, yv)));
        store2(y + i, _mm256_add_pd(cmul(u2r, u2i, xv), cmul(u3r, u3i, yv)));
    }
    for (; i < n; ++i) {
        const cplx xv = x[i], yv = y[i];
        x[i] = u[0] * xv + u[1] * yv;
        y[i] = u[2] * xv + u[3] * yv;
    }
}

double norm2_avx2(const cplx* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = load2(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

}  // namespace

const KernelTable kAvx2Table{Backend::avx2, axpy_avx2, dotc_avx2, rot2_avx2, norm2_avx2};

}  // namespace enthier::kernels::detail
