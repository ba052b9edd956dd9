#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Complex level-1 kernels used by the dense linear algebra layer.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant. The active table is picked once at startup from the CPU features
// and the ENTHIER_KERNELS environment variable (scalar | avx2 | auto), and can
// be switched at runtime for equivalence testing.
namespace enthier::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

struct KernelTable {
    Backend backend;
    // y += a * x
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    // sum_i conj(x_i) * y_i
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // x' = u[0] x + u[1] y ;  y' = u[2] x + u[3] y
    void (*rot2)(cplx* x, cplx* y, std::size_t n, const cplx* u);
    // sum_i |x_i|^2
    double (*norm2)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table() noexcept;

/// True when the AVX2 table exists and the running CPU has AVX2 and FMA.
bool avx2_supported() noexcept;

const KernelTable& active() noexcept;
Backend active_backend() noexcept;

/// Throws enthier::Error if the backend is not available on this machine.
void set_backend(Backend b);

std::string_view backend_name(Backend b) noexcept;

inline void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { active().axpy(a, x, y, n); }
inline cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return active().dotc(x, y, n); }
inline void rot2(cplx* x, cplx* y, std::size_t n, const cplx* u) { active().rot2(x, y, n, u); }
inline double norm2(const cplx* x, std::size_t n) { return active().norm2(x, n); }

/// RAII switch used by tests: selects a backend and restores the previous one.
class ScopedBackend {
public:
    explicit ScopedBackend(Backend b) : previous_(active_backend()) { set_backend(b); }
    ~ScopedBackend() { set_backend(previous_); }
    ScopedBackend(const ScopedBackend&) = delete;
    ScopedBackend& operator=(const ScopedBackend&) = delete;

private:
    Backend previous_;
};

}  // namespace enthier::kernels
