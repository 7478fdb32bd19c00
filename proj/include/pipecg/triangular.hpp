#pragma once

#include <cmath>
#include <vector>

#include "pipecg/dense_matrix.hpp"
#include "pipecg/errors.hpp"

namespace pipecg {

/// Banded upper triangular matrix; entry (m, k) is stored for
/// 0 <= k - m < bandwidth. Columns can be appended, which is how the deep
/// pipelined solver grows its basis transformation.
class BandedUpperTri {
public:
    BandedUpperTri() = default;
    explicit BandedUpperTri(int bandwidth) : bandwidth_(bandwidth) {}
    BandedUpperTri(int dim, int bandwidth) : bandwidth_(bandwidth) {
        for (int i = 0; i < dim; ++i) append_column();
    }

    int dim() const { return dim_; }
    int bandwidth() const { return bandwidth_; }

    void append_column() {
        slots_.insert(slots_.end(), bandwidth_, 0.0);
        ++dim_;
    }

    bool in_band(int row, int col) const {
        return row >= 0 && col >= row && col - row < bandwidth_;
    }

    /// Zero outside the band by construction.
    double get(int row, int col) const {
        if (row > col || col >= dim_) return 0.0;
        if (!in_band(row, col)) return 0.0;
        return slots_[slot(row, col)];
    }

    void set(int row, int col, double value) {
        if (!in_band(row, col) || col >= dim_)
            throw DimensionMismatchError("banded entry outside band");
        slots_[slot(row, col)] = value;
    }

    /// Leading j x j block (columns 0..j-1).
    BandedUpperTri prefix(int j) const {
        BandedUpperTri out(bandwidth_);
        for (int c = 0; c < j; ++c) {
            out.append_column();
            for (int r = std::max(0, c - bandwidth_ + 1); r <= c; ++r)
                out.set(r, c, get(r, c));
        }
        return out;
    }

private:
    std::size_t slot(int row, int col) const {
        return static_cast<std::size_t>(col) * bandwidth_ + (col - row);
    }

    int dim_ = 0;
    int bandwidth_ = 1;
    std::vector<double> slots_;
};

/// Dense upper triangular matrix (strict lower part is zero).
class DenseUpperTri {
public:
    DenseUpperTri() = default;
    explicit DenseUpperTri(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim, 0.0) {}

    static DenseUpperTri identity(int n) {
        DenseUpperTri t(n);
        for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
        return t;
    }

    int dim() const { return dim_; }
    double get(int r, int c) const { return r > c ? 0.0 : data_[static_cast<std::size_t>(r) * dim_ + c]; }
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * dim_ + c]; }

private:
    int dim_ = 0;
    std::vector<double> data_;
};

/// Inverse by column-wise back substitution. Diagonal entries with
/// |t_ii| < 1e-300 raise SingularMatrixError carrying the offending index.
DenseUpperTri invert_upper_triangular(const BandedUpperTri& t);
DenseUpperTri invert_upper_triangular(const DenseUpperTri& t);

double max_abs_norm(const BandedUpperTri& t);
double max_abs_norm(const DenseUpperTri& t);

/// ||T^{-1}||_2 = 1/sigma_min(T) by inverse power iteration with banded
/// triangular solves. Returns +inf when a diagonal entry is numerically zero.
double inverse_two_norm(const BandedUpperTri& t);

}  // namespace pipecg
