#include "pipecg/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pipecg::kernels {

namespace detail {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_scalar(double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void scaled_copy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

void divide_scalar(double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] /= a;
}

void divided_copy_scalar(const double* x, double a, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / a;
}

}  // namespace detail

namespace {

struct Ops {
    Isa isa;
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*xpby)(const double*, double, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*scaled_copy)(double, const double*, double*, std::size_t);
    void (*divide)(double, double*, std::size_t);
    void (*divided_copy)(const double*, double, double*, std::size_t);
};

Ops select_ops() {
    Ops ops{Isa::scalar, detail::axpy_scalar, detail::xpby_scalar,
            detail::scale_scalar, detail::scaled_copy_scalar,
            detail::divide_scalar, detail::divided_copy_scalar};
    const char* force = std::getenv("PIPECG_FORCE_SCALAR");
    if (force && force[0] == '1') return ops;
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        ops = Ops{Isa::avx2, detail::axpy_avx2, detail::xpby_avx2,
                  detail::scale_avx2, detail::scaled_copy_avx2,
                  detail::divide_avx2, detail::divided_copy_avx2};
    }
#elif defined(__aarch64__)
    ops = Ops{Isa::neon, detail::axpy_neon, detail::xpby_neon,
              detail::scale_neon, detail::scaled_copy_neon,
              detail::divide_neon, detail::divided_copy_neon};
#endif
    return ops;
}

const Ops& ops() {
    static const Ops selected = select_ops();
    return selected;
}

}  // namespace

Isa active_isa() { return ops().isa; }

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        default: return "scalar";
    }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    ops().axpy(a, x.data(), y.data(), y.size());
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    ops().xpby(x.data(), b, y.data(), y.size());
}

void scale_inplace(double a, std::span<double> y) {
    ops().scale(a, y.data(), y.size());
}

void scaled_copy(double a, std::span<const double> x, std::span<double> y) {
    ops().scaled_copy(a, x.data(), y.data(), y.size());
}

void divide_inplace(double a, std::span<double> y) {
    ops().divide(a, y.data(), y.size());
}

void divided_copy(std::span<const double> x, double a, std::span<double> y) {
    ops().divided_copy(x.data(), a, y.data(), y.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
    const double* xp = x.data();
    const double* yp = y.data();
    const std::size_t n = x.size();
    double acc[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (int k = 0; k < 8; ++k) acc[k] += xp[i + k] * yp[i + k];
    }
    double sum = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
                 ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    for (; i < n; ++i) sum += xp[i] * yp[i];
    return sum;
}

}  // namespace pipecg::kernels
