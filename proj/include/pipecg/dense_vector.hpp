#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "pipecg/errors.hpp"
#include "pipecg/kernels.hpp"

namespace pipecg {

/// Fixed-length vector of doubles.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
    DenseVector(std::initializer_list<double> init) : values_(init) {}
    explicit DenseVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }
    std::span<const double> span() const { return values_; }
    std::span<double> span() { return values_; }
    const std::vector<double>& values() const { return values_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    void fill(double v) { values_.assign(values_.size(), v); }

private:
    std::vector<double> values_;
};

inline void check_same_size(const DenseVector& v, const DenseVector& w) {
    if (v.size() != w.size())
        throw DimensionMismatchError("vector length mismatch");
}

/// Sequential dot product, ascending index order.
inline double dot(const DenseVector& v, const DenseVector& w) {
    check_same_size(v, w);
    return kernels::dot(v.span(), w.span());
}

inline double norm2(const DenseVector& v) { return std::sqrt(dot(v, v)); }

/// result = alpha * v + w
inline DenseVector axpy(double alpha, const DenseVector& v, const DenseVector& w) {
    check_same_size(v, w);
    DenseVector out = w;
    kernels::axpy(alpha, v.span(), out.span());
    return out;
}

/// w += alpha * v
inline void axpy_inplace(double alpha, const DenseVector& v, DenseVector& w) {
    check_same_size(v, w);
    kernels::axpy(alpha, v.span(), w.span());
}

inline DenseVector scale(double alpha, const DenseVector& v) {
    DenseVector out(v.size());
    kernels::scaled_copy(alpha, v.span(), out.span());
    return out;
}

/// w = v + beta * w
inline void xpby_inplace(const DenseVector& v, double beta, DenseVector& w) {
    check_same_size(v, w);
    kernels::xpby(v.span(), beta, w.span());
}

/// out = v - w
inline DenseVector subtract(const DenseVector& v, const DenseVector& w) {
    check_same_size(v, w);
    DenseVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - w[i];
    return out;
}

}  // namespace pipecg
