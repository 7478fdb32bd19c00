#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "pipecg/csr_matrix.hpp"

namespace pipecg {

/// A x = b instance with optional known solution and spectral interval.
struct LinearSystem {
    SparseMatrixCsr A;
    DenseVector b;
    DenseVector x0;
    std::optional<DenseVector> x_true;
    std::optional<std::pair<double, double>> spectral_interval;
};

enum class RhsMode { uniform_inv_sqrt_n, ones };

/// 5-point finite difference Laplacian on an nx-by-ny interior grid,
/// Dirichlet boundary eliminated, lexicographic ordering (x fastest).
/// Unscaled stencil (diagonal 4, neighbors -1), spectrum inside (0, 8).
SparseMatrixCsr poisson2d(int nx, int ny);

/// x_true filled with 1/sqrt(n) or 1; b = A x_true.
std::pair<DenseVector, DenseVector> rhs_from_solution(const SparseMatrixCsr& A,
                                                      RhsMode mode);

/// Matrix Market coordinate real symmetric/general; symmetric storage is
/// expanded to the full pattern, duplicates summed.
SparseMatrixCsr load_matrix_market(const std::string& path);
SparseMatrixCsr load_matrix_market(std::istream& in);

struct SpectralInterval {
    std::pair<double, double> interval;  // shift interval convention (0, 8)
    std::pair<double, double> exact;     // analytic extreme eigenvalues
};

SpectralInterval spectral_interval_poisson(int nx, int ny);

/// Poisson system with x0 = 0 and the constructed right-hand side.
LinearSystem make_poisson_system(int nx, int ny,
                                 RhsMode mode = RhsMode::uniform_inv_sqrt_n);

}  // namespace pipecg
