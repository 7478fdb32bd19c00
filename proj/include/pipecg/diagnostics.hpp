#pragma once

#include <functional>
#include <optional>
#include <span>

#include "pipecg/problems.hpp"
#include "pipecg/solver_types.hpp"

namespace pipecg {

/// Per-iteration diagnostic series; entries align with solver snapshots.
struct GapTrace {
    std::vector<double> true_res;
    std::vector<double> rec_res;
    std::vector<double> gap_f;         // residual gap (cg/pcg) or basis gap (plcg)
    std::vector<double> gap_g, gap_h, gap_e;  // pcg auxiliary gaps
    std::vector<double> gap_residual;  // plcg residual gap
};

/// ||b - A x_j|| per iteration; one spmv outside the solver's arithmetic.
class TrueResidualObserver : public SolveObserver {
public:
    explicit TrueResidualObserver(const LinearSystem& system)
        : system_(system), work_(system.b.size()) {}
    void on_iteration(const IterationSnapshot& snapshot) override;
    const std::vector<double>& trace() const { return trace_; }

private:
    const LinearSystem& system_;
    DenseVector work_;
    std::vector<double> trace_;
};

/// ||f_j|| with f_j = (b - A x_j) - r_j.
class CgGapObserver : public SolveObserver {
public:
    explicit CgGapObserver(const LinearSystem& system)
        : system_(system), work_(system.b.size()) {}
    void on_iteration(const IterationSnapshot& snapshot) override;
    const std::vector<double>& trace() const { return trace_; }

private:
    const LinearSystem& system_;
    DenseVector work_;
    std::vector<double> trace_;
};

/// The four coupled gaps of pipelined CG:
///   f = (b - A x) - r,  g = A p - s,  h = A r - w,  e = A s - z.
/// Entries on an iteration where a quantity is undefined are NaN.
class PcgGapObserver : public SolveObserver {
public:
    explicit PcgGapObserver(const LinearSystem& system)
        : system_(system), work_(system.b.size()) {}
    void on_iteration(const IterationSnapshot& snapshot) override;
    const std::vector<double>& f() const { return f_; }
    const std::vector<double>& g() const { return g_; }
    const std::vector<double>& h() const { return h_; }
    const std::vector<double>& e() const { return e_; }

private:
    const LinearSystem& system_;
    DenseVector work_;
    std::vector<double> f_, g_, h_, e_;
};

/// Gap between the basis vector that satisfies the three-term Lanczos
/// recurrence exactly on the computed data and the recursively computed one.
/// Maintains the reference vector with one extra spmv per iteration.
class PlcgBasisGapObserver : public SolveObserver {
public:
    explicit PlcgBasisGapObserver(const LinearSystem& system,
                                  const Preconditioner* preconditioner = nullptr,
                                  bool retain_gap_columns = false)
        : system_(system), preconditioner_(preconditioner),
          retain_(retain_gap_columns), reference_(system.b.size()),
          gap_vec_(system.b.size()), work_(system.b.size()) {}

    void on_iteration(const IterationSnapshot& snapshot) override;
    void on_restart(const RestartEvent&) override { pending_reset_ = true; }

    const std::vector<double>& trace() const { return trace_; }
    /// Gap vector of the latest iteration (for the residual-gap observer).
    const DenseVector& gap_vector() const { return gap_vec_; }
    int last_record() const { return last_record_; }
    /// All gap columns, retained only when requested at construction.
    const std::vector<DenseVector>& gap_columns() const { return gap_columns_; }

private:
    const LinearSystem& system_;
    const Preconditioner* preconditioner_;
    bool retain_;
    bool started_ = false;
    bool pending_reset_ = false;
    int last_record_ = -1;
    DenseVector reference_;  // Lanczos-exact v_{a+1} candidate
    DenseVector gap_vec_;
    DenseVector work_;
    std::vector<double> trace_;
    std::vector<DenseVector> gap_columns_;
};

/// Residual gap reconstructed from the basis gap:
///   ||b-Ax_j|| (vbold_j - v_j) + (||b-Ax_j|| - |zeta_j|) v_j.
/// Requires the basis-gap observer to run first on every iteration.
class PlcgResidualGapObserver : public SolveObserver {
public:
    PlcgResidualGapObserver(const LinearSystem& system,
                            const PlcgBasisGapObserver& basis_gaps)
        : system_(system), basis_(basis_gaps), work_(system.b.size()),
          residual_(system.b.size()) {}
    void on_iteration(const IterationSnapshot& snapshot) override;
    const std::vector<double>& trace() const { return trace_; }

private:
    const LinearSystem& system_;
    const PlcgBasisGapObserver& basis_;
    DenseVector work_;
    DenseVector residual_;
    std::vector<double> trace_;
};

struct PropagationNormPoint {
    int j = 0;  // dimension of the propagation matrix
    double value = 0.0;
    bool singular = false;  // no value; matrix numerically singular
};

struct PropagationNormTrace {
    std::vector<PropagationNormPoint> points;
};

/// Maximum norms of the matrices that propagate local rounding errors:
/// ||U_j||_max for cg (identically one), ||B^{-1}_j||_max for pcg from the
/// recorded beta history, ||G^{-1}_j||_max for plcg by banded back
/// substitution on the retained transformation prefixes. `sample_stride`
/// thins the series for long runs.
PropagationNormTrace propagation_norms(const SolveReport& report, Method method,
                                       int sample_stride = 1);

struct LemmaBounds {
    double ritz_bound = 0.0;  // (min_k |P(theta_k)|)^{-1}, may be +inf
    std::optional<double> monomial_bound;  // (1/min_k |theta_k|)^l, zero shifts only
};

/// Spectral bounds on ||G^{-1}||_max evaluated from the Ritz values of the
/// given Lanczos matrix.
LemmaBounds lemma_bounds(const SymTridiag& h, const ShiftSchedule& shifts);

/// Max-entry discrepancy between the principal submatrix of the basis
/// transformation (first l rows/columns removed) and the l-row-shifted block
/// of P_l(H_{j,j}), built with an exact zeros/ones shift operator.
double lemma2_check(const SolveReport& report, const ShiftSchedule& shifts, int j);

struct BoundsCell {
    int l = 0;
    int j = 0;
    std::optional<double> measured;   // ||G^{-1}_j||_max; empty when singular
    std::optional<double> two_norm_bound;  // ||G^{-1}_j||_2 >= measured
    double ritz_bound = 0.0;          // Ritz-value bound
    std::optional<double> monomial_bound;
};

struct BoundsTable {
    std::vector<BoundsCell> cells;
};

/// Runs standard-mode plcg once per pipeline depth and samples the measured
/// propagation norm and its bounds at the requested iterations.
BoundsTable table1_grid(const LinearSystem& system, std::span<const int> l_values,
                        std::span<const int> j_values,
                        const std::function<ShiftSchedule(int)>& make_shifts);

}  // namespace pipecg
