#include "kernels_impl.hpp"

namespace enthier::kernels::detail {

namespace {

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
    }
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void rot2_scalar(cplx* x, cplx* y, std::size_t n, const cplx* u) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xv = x[i], yv = y[i];
        x[i] = u[0] * xv + u[1] * yv;
        y[i] = u[2] * xv + u[3] * yv;
    }
}

double norm2_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

}  // namespace

const KernelTable kScalarTable{Backend::scalar, axpy_scalar, dotc_scalar, rot2_scalar, norm2_scalar};

}  // namespace enthier::kernels::detail
