#pragma once

#include <cstddef>
#include <span>

// Dense vector kernels. Elementwise operations (axpy, xpby, scaling) have
// SIMD variants selected once at startup; they are required to be bit-identical
// to the scalar reference, which is what the equivalence tests assert. With
// -ffp-contract=off each lane performs the same mul-then-add roundings as the
// scalar loop, so vectorizing does not change results.
//
// Reductions are deterministic with a pinned summation shape so that
// finite-precision runs are bit-reproducible. Long dot products use eight
// independent accumulators over interleaved lanes (acc[i%8] += x[i]*y[i])
// combined in fixed ascending order — BLAS-grade accuracy; a plain
// sequential sum is ~sqrt(8)x noisier and measurably destabilizes the deep
// pipelines. Short sums (spmv rows, Gram updates) stay plain ascending.

namespace pipecg::kernels {

enum class Isa { scalar, avx2, neon };

/// Instruction set picked at startup (PIPECG_FORCE_SCALAR=1 overrides).
Isa active_isa();
const char* isa_name(Isa isa);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// y = x + b * y
void xpby(std::span<const double> x, double b, std::span<double> y);

/// y *= a
void scale_inplace(double a, std::span<double> y);

/// y /= a (single rounding per element, unlike multiplying by 1/a)
void divide_inplace(double a, std::span<double> y);

/// y = x / a
void divided_copy(std::span<const double> x, double a, std::span<double> y);

/// y = a * x
void scaled_copy(double a, std::span<const double> x, std::span<double> y);

/// Deterministic dot product: eight interleaved accumulator lanes, each
/// advancing in ascending index order, combined low lane to high lane;
/// the tail (n % 8 entries) is added sequentially last.
double dot(std::span<const double> x, std::span<const double> y);

namespace detail {

void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void xpby_scalar(const double* x, double b, double* y, std::size_t n);
void scale_scalar(double a, double* y, std::size_t n);
void scaled_copy_scalar(double a, const double* x, double* y, std::size_t n);
void divide_scalar(double a, double* y, std::size_t n);
void divided_copy_scalar(const double* x, double a, double* y, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void xpby_avx2(const double* x, double b, double* y, std::size_t n);
void scale_avx2(double a, double* y, std::size_t n);
void scaled_copy_avx2(double a, const double* x, double* y, std::size_t n);
void divide_avx2(double a, double* y, std::size_t n);
void divided_copy_avx2(const double* x, double a, double* y, std::size_t n);
#endif
#if defined(__aarch64__)
void axpy_neon(double a, const double* x, double* y, std::size_t n);
void xpby_neon(const double* x, double b, double* y, std::size_t n);
void scale_neon(double a, double* y, std::size_t n);
void scaled_copy_neon(double a, const double* x, double* y, std::size_t n);
void divide_neon(double a, double* y, std::size_t n);
void divided_copy_neon(const double* x, double a, double* y, std::size_t n);
#endif

}  // namespace detail

}  // namespace pipecg::kernels
