#pragma once

#include <vector>

#include "pipecg/dense_vector.hpp"

namespace pipecg {

/// Symmetric sparse matrix in compressed sparse row form. The full pattern is
/// stored (both triangles); construction verifies exact structural and
/// numerical symmetry and caches mu, the maximum nonzero count over all rows.
class SparseMatrixCsr {
public:
    struct Triplet {
        int row;
        int col;
        double value;
    };

    /// Build from raw CSR arrays. Column indices must be sortable per row;
    /// duplicates are not allowed here (use from_triplets for that).
    SparseMatrixCsr(int n, std::vector<int> row_ptr, std::vector<int> col_idx,
                    std::vector<double> vals);

    /// Build from coordinate entries; duplicates are summed.
    static SparseMatrixCsr from_triplets(int n, std::vector<Triplet> entries);

    int n() const { return n_; }
    int mu() const { return mu_; }
    std::size_t nnz() const { return vals_.size(); }
    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& vals() const { return vals_; }

    /// Entry lookup (0 when not stored); O(log nnz_row).
    double at(int row, int col) const;

private:
    void validate_and_finalize();

    int n_ = 0;
    int mu_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> vals_;
};

/// y = A x, row sums accumulated in ascending column order so repeated calls
/// are bit-identical.
void spmv(const SparseMatrixCsr& A, const DenseVector& x, DenseVector& y);
DenseVector spmv(const SparseMatrixCsr& A, const DenseVector& x);

}  // namespace pipecg
