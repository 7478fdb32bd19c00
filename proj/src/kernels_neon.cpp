#include "pipecg/kernels.hpp"

#include <arm_neon.h>

// NEON variants of the elementwise kernels. vmulq/vaddq (no fused multiply-add)
// so each lane rounds exactly like the scalar reference.

namespace pipecg::kernels::detail {

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        float64x2_t yv = vld1q_f64(y + i);
        vst1q_f64(y + i, vaddq_f64(yv, vmulq_f64(av, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_neon(const double* x, double b, double* y, std::size_t n) {
    const float64x2_t bv = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        float64x2_t yv = vld1q_f64(y + i);
        vst1q_f64(y + i, vaddq_f64(xv, vmulq_f64(bv, yv)));
    }
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_neon(double a, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vmulq_f64(av, vld1q_f64(y + i)));
    }
    for (; i < n; ++i) y[i] *= a;
}

void scaled_copy_neon(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vmulq_f64(av, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] = a * x[i];
}

void divide_neon(double a, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vdivq_f64(vld1q_f64(y + i), av));
    }
    for (; i < n; ++i) y[i] /= a;
}

void divided_copy_neon(const double* x, double a, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vdivq_f64(vld1q_f64(x + i), av));
    }
    for (; i < n; ++i) y[i] = x[i] / a;
}

}  // namespace pipecg::kernels::detail
