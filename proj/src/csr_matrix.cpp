#include "pipecg/csr_matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <string>

namespace pipecg {

SparseMatrixCsr::SparseMatrixCsr(int n, std::vector<int> row_ptr,
                                 std::vector<int> col_idx, std::vector<double> vals)
    : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      vals_(std::move(vals)) {
    validate_and_finalize();
}

SparseMatrixCsr SparseMatrixCsr::from_triplets(int n, std::vector<Triplet> entries) {
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> vals;
    col_idx.reserve(entries.size());
    vals.reserve(entries.size());

    for (std::size_t k = 0; k < entries.size();) {
        const int r = entries[k].row;
        const int c = entries[k].col;
        if (r < 0 || r >= n || c < 0 || c >= n)
            throw DimensionMismatchError("triplet index out of range");
        double sum = 0.0;
        while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
            sum += entries[k].value;
            ++k;
        }
        col_idx.push_back(c);
        vals.push_back(sum);
        ++row_ptr[static_cast<std::size_t>(r) + 1];
    }
    for (int r = 0; r < n; ++r) row_ptr[r + 1] += row_ptr[r];
    return SparseMatrixCsr(n, std::move(row_ptr), std::move(col_idx), std::move(vals));
}

void SparseMatrixCsr::validate_and_finalize() {
    if (n_ < 0 || row_ptr_.size() != static_cast<std::size_t>(n_) + 1 ||
        row_ptr_.front() != 0 ||
        row_ptr_.back() != static_cast<int>(col_idx_.size()) ||
        col_idx_.size() != vals_.size())
        throw DimensionMismatchError("inconsistent CSR arrays");

    mu_ = 0;
    for (int r = 0; r < n_; ++r) {
        const int begin = row_ptr_[r];
        const int end = row_ptr_[r + 1];
        if (end < begin) throw DimensionMismatchError("row_ptr not nondecreasing");
        mu_ = std::max(mu_, end - begin);
        std::vector<std::pair<int, double>> row;
        row.reserve(end - begin);
        for (int k = begin; k < end; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= n_)
                throw DimensionMismatchError("column index out of range");
            row.emplace_back(col_idx_[k], vals_[k]);
        }
        std::sort(row.begin(), row.end());
        for (std::size_t i = 1; i < row.size(); ++i)
            if (row[i].first == row[i - 1].first)
                throw DimensionMismatchError("duplicate entry in CSR row");
        for (int k = begin; k < end; ++k) {
            col_idx_[k] = row[k - begin].first;
            vals_[k] = row[k - begin].second;
        }
    }

    // Exact symmetry, structural and numerical.
    for (int r = 0; r < n_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const int c = col_idx_[k];
            if (at(c, r) != vals_[k])
                throw DimensionMismatchError(
                    "matrix is not symmetric at (" + std::to_string(r) + "," +
                    std::to_string(c) + ")");
        }
    }
}

double SparseMatrixCsr::at(int row, int col) const {
    const auto begin = col_idx_.begin() + row_ptr_[row];
    const auto end = col_idx_.begin() + row_ptr_[row + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return vals_[it - col_idx_.begin()];
}

void spmv(const SparseMatrixCsr& A, const DenseVector& x, DenseVector& y) {
    if (static_cast<std::size_t>(A.n()) != x.size())
        throw DimensionMismatchError("spmv dimension mismatch");
    if (y.size() != x.size()) y = DenseVector(x.size());
    const int* rp = A.row_ptr().data();
    const int* ci = A.col_idx().data();
    const double* av = A.vals().data();
    const double* xv = x.data();
    double* yv = y.data();
    for (int r = 0; r < A.n(); ++r) {
        double sum = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) sum += av[k] * xv[ci[k]];
        yv[r] = sum;
    }
}

DenseVector spmv(const SparseMatrixCsr& A, const DenseVector& x) {
    DenseVector y(x.size());
    spmv(A, x, y);
    return y;
}

}  // namespace pipecg
