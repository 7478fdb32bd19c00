#include "pipecg/triangular.hpp"

#include <algorithm>
#include <limits>

namespace pipecg {

namespace {

constexpr double kSingularFloor = 1e-300;

// Solve T * X = I column by column; Get(r,c) must return 0 outside the
// stored pattern.
template <typename Get>
DenseUpperTri invert_impl(int n, int lower_row_bound, Get get) {
    DenseUpperTri inv(n);
    for (int i = 0; i < n; ++i) {
        if (std::fabs(get(i, i)) < kSingularFloor)
            throw SingularMatrixError("singular triangular matrix", i);
    }
    for (int c = 0; c < n; ++c) {
        inv.at(c, c) = 1.0 / get(c, c);
        for (int r = c - 1; r >= 0; --r) {
            double sum = 0.0;
            const int kmax = std::min(c, lower_row_bound > 0 ? r + lower_row_bound - 1 : c);
            for (int k = r + 1; k <= kmax; ++k) sum += get(r, k) * inv.get(k, c);
            inv.at(r, c) = -sum / get(r, r);
        }
    }
    return inv;
}

}  // namespace

DenseUpperTri invert_upper_triangular(const BandedUpperTri& t) {
    return invert_impl(t.dim(), t.bandwidth(),
                       [&t](int r, int c) { return t.get(r, c); });
}

DenseUpperTri invert_upper_triangular(const DenseUpperTri& t) {
    return invert_impl(t.dim(), 0, [&t](int r, int c) { return t.get(r, c); });
}

double max_abs_norm(const BandedUpperTri& t) {
    double mx = 0.0;
    for (int c = 0; c < t.dim(); ++c)
        for (int r = std::max(0, c - t.bandwidth() + 1); r <= c; ++r)
            mx = std::max(mx, std::fabs(t.get(r, c)));
    return mx;
}

double max_abs_norm(const DenseUpperTri& t) {
    double mx = 0.0;
    for (int r = 0; r < t.dim(); ++r)
        for (int c = r; c < t.dim(); ++c) mx = std::max(mx, std::fabs(t.get(r, c)));
    return mx;
}

double inverse_two_norm(const BandedUpperTri& t) {
    const int n = t.dim();
    const int band = t.bandwidth();
    if (n == 0) return 0.0;
    for (int i = 0; i < n; ++i)
        if (std::fabs(t.get(i, i)) < kSingularFloor)
            return std::numeric_limits<double>::infinity();

    std::vector<double> y(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> u(n), w(n);
    double lambda = 0.0;
    for (int it = 0; it < 500; ++it) {
        // u = T^{-T} y (forward), w = T^{-1} u (backward)
        for (int i = 0; i < n; ++i) {
            double sum = y[i];
            for (int k = std::max(0, i - band + 1); k < i; ++k)
                sum -= t.get(k, i) * u[k];
            u[i] = sum / t.get(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double sum = u[i];
            const int kmax = std::min(n - 1, i + band - 1);
            for (int k = i + 1; k <= kmax; ++k) sum -= t.get(i, k) * w[k];
            w[i] = sum / t.get(i, i);
        }
        double norm = 0.0;
        for (double v : w) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) return 0.0;
        const double lambda_next = norm;  // Rayleigh estimate of 1/sigma_min^2
        for (int i = 0; i < n; ++i) y[i] = w[i] / norm;
        if (it > 4 && std::fabs(lambda_next - lambda) <= 1e-10 * lambda_next) {
            lambda = lambda_next;
            break;
        }
        lambda = lambda_next;
    }
    return std::sqrt(lambda);
}

}  // namespace pipecg
