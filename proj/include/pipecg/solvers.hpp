#pragma once

#include "pipecg/problems.hpp"
#include "pipecg/solver_types.hpp"

namespace pipecg {

/// Classic Conjugate Gradients. The recursive residual is the stopping
/// quantity: sqrt((r_i, r_i)) / ||r_0|| < tolerance, tested before the
/// solution update.
SolveReport cg_solve(const LinearSystem& system, const SolverConfig& config,
                     SolveObserver* observer = nullptr);

/// Pipelined CG: one global reduction per iteration, auxiliary recurrences
/// for w = Ar, s = Ap and z = As.
SolveReport pcg_solve(const LinearSystem& system, const SolverConfig& config,
                      SolveObserver* observer = nullptr);

/// Deep pipelined CG with pipeline depth l = config.pipeline_depth and the
/// shifted auxiliary basis z_{i+1} = (A - sigma_i I) z_i. Standard mode
/// rebuilds v from the auxiliary basis through the transformation matrix;
/// stabilized mode uses the three-term Lanczos recurrence for v at the cost
/// of one extra spmv per iteration. With config.preconditioner set, the
/// basis is M-orthonormal and the Gram entries become M-dot products.
SolveReport plcg_solve(const LinearSystem& system, const SolverConfig& config,
                       SolveObserver* observer = nullptr);

/// M^{-1} v = v ./ diag(A); requires strictly positive diagonal.
Preconditioner jacobi_preconditioner(const SparseMatrixCsr& A);

}  // namespace pipecg
