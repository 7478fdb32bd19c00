#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pipecg {

/// Row-major dense matrix, used for small structured-matrix work
/// (matrix polynomials, lemma checks, diagnostics).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const std::vector<double>& data() const { return data_; }

    DenseMatrix multiply(const DenseMatrix& other) const {
        DenseMatrix out(rows_, other.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double a = at(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < other.cols_; ++j)
                    out.at(i, j) += a * other.at(k, j);
            }
        return out;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_norm(const DenseMatrix& m) {
    double mx = 0.0;
    for (double v : m.data()) mx = std::max(mx, std::fabs(v));
    return mx;
}

}  // namespace pipecg
