#include "pipecg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pipecg/solvers.hpp"

namespace pipecg {

void TrueResidualObserver::on_iteration(const IterationSnapshot& snapshot) {
    spmv(system_.A, *snapshot.x, work_);
    double sum = 0.0;
    for (std::size_t i = 0; i < work_.size(); ++i) {
        const double d = system_.b[i] - work_[i];
        sum += d * d;
    }
    trace_.push_back(std::sqrt(sum));
}

void CgGapObserver::on_iteration(const IterationSnapshot& snapshot) {
    spmv(system_.A, *snapshot.x, work_);
    double sum = 0.0;
    for (std::size_t i = 0; i < work_.size(); ++i) {
        const double d = (system_.b[i] - work_[i]) - (*snapshot.r)[i];
        sum += d * d;
    }
    trace_.push_back(std::sqrt(sum));
}

namespace {

double defect_norm(const SparseMatrixCsr& A, const DenseVector& operand,
                   const DenseVector& recursive, DenseVector& work) {
    spmv(A, operand, work);
    double sum = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const double d = work[i] - recursive[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

void PcgGapObserver::on_iteration(const IterationSnapshot& snapshot) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    spmv(system_.A, *snapshot.x, work_);
    double sum = 0.0;
    for (std::size_t i = 0; i < work_.size(); ++i) {
        const double d = (system_.b[i] - work_[i]) - (*snapshot.r)[i];
        sum += d * d;
    }
    f_.push_back(std::sqrt(sum));
    h_.push_back(defect_norm(system_.A, *snapshot.r, *snapshot.w, work_));
    g_.push_back(snapshot.p ? defect_norm(system_.A, *snapshot.p, *snapshot.s, work_) : nan);
    e_.push_back(snapshot.s ? defect_norm(system_.A, *snapshot.s, *snapshot.z, work_) : nan);
}

void PlcgBasisGapObserver::on_iteration(const IterationSnapshot& snapshot) {
    const int a = snapshot.lanczos->dim() - 1;  // segment-local index
    if (!started_ || pending_reset_ || a == 0) {
        started_ = true;
        pending_reset_ = false;
        gap_vec_.fill(0.0);
        trace_.push_back(0.0);
    } else {
        for (std::size_t i = 0; i < gap_vec_.size(); ++i)
            gap_vec_[i] = reference_[i] - (*snapshot.v_cur)[i];
        trace_.push_back(norm2(gap_vec_));
    }
    if (retain_) gap_columns_.push_back(gap_vec_);
    last_record_ = snapshot.iter;

    // Reference vector for the next iteration: the Lanczos recurrence applied
    // to the solver's computed v's. The terms are combined in the opposite
    // order from the solver's stabilized update so the two evaluations do not
    // share an arithmetic path (the measured gap is then a genuine local
    // rounding error rather than an exact zero).
    spmv(system_.A, *snapshot.v_cur, work_);
    if (preconditioner_) {
        preconditioner_->apply(work_, reference_);
    } else {
        reference_ = work_;
    }
    if (a >= 1) axpy_inplace(-snapshot.lanczos->delta(a - 1), *snapshot.v_prev, reference_);
    axpy_inplace(-snapshot.gamma, *snapshot.v_cur, reference_);
    if (snapshot.delta == 0.0)
        throw BreakdownError("zero delta in basis gap recurrence", snapshot.iter);
    kernels::divide_inplace(snapshot.delta, reference_.span());
}

void PlcgResidualGapObserver::on_iteration(const IterationSnapshot& snapshot) {
    if (basis_.last_record() != snapshot.iter)
        throw SolverError("basis gap observer must run before the residual gap observer",
                          snapshot.iter);
    spmv(system_.A, *snapshot.x, work_);
    for (std::size_t i = 0; i < work_.size(); ++i)
        residual_[i] = system_.b[i] - work_[i];
    const double true_norm = norm2(residual_);

    kernels::scaled_copy(true_norm, basis_.gap_vector().span(), work_.span());
    axpy_inplace(true_norm - std::fabs(snapshot.zeta), *snapshot.v_cur, work_);
    trace_.push_back(norm2(work_));
}

PropagationNormTrace propagation_norms(const SolveReport& report, Method method,
                                       int sample_stride) {
    PropagationNormTrace trace;
    const int stride = std::max(1, sample_stride);
    const int records = static_cast<int>(report.rec_res_norms.size());

    switch (method) {
        case Method::cg: {
            for (int j = 1; j <= records; j += stride)
                trace.points.push_back({j, 1.0, false});
            break;
        }
        case Method::pcg: {
            // Entries of B^{-1}_j are products beta_{i+1}..beta_{k}; track the
            // running maximum as columns accumulate.
            double running_max = 1.0;
            for (int j = 1; j <= records; ++j) {
                const int k = j - 1;  // newest beta index contributing to B_j
                if (k >= 1 && !std::isnan(report.betas[k])) {
                    double prod = 1.0;
                    for (int m = k; m >= 1; --m) {
                        prod *= report.betas[m];
                        running_max = std::max(running_max, std::fabs(prod));
                    }
                }
                if ((j - 1) % stride == 0 || j == records)
                    trace.points.push_back({j, running_max, false});
            }
            break;
        }
        case Method::plcg: {
            for (const PlcgSegment& seg : report.segments) {
                const int local_records = seg.lanczos.dim();
                for (int local_j = 1; local_j <= local_records; local_j += stride) {
                    PropagationNormPoint point;
                    point.j = seg.first_record + local_j;
                    try {
                        point.value =
                            max_abs_norm(invert_upper_triangular(seg.basis_transform.prefix(local_j)));
                    } catch (const SingularMatrixError&) {
                        point.singular = true;
                    }
                    trace.points.push_back(point);
                }
            }
            break;
        }
    }
    return trace;
}

LemmaBounds lemma_bounds(const SymTridiag& h, const ShiftSchedule& shifts) {
    const std::vector<double> ritz = sym_tridiag_eigenvalues(h);
    LemmaBounds out;
    double pmin = std::numeric_limits<double>::infinity();
    double tmin = std::numeric_limits<double>::infinity();
    for (double theta : ritz) {
        pmin = std::min(pmin, std::fabs(shifted_poly_eval(theta, shifts.shifts)));
        tmin = std::min(tmin, std::fabs(theta));
    }
    out.ritz_bound = pmin > 0.0 ? 1.0 / pmin : std::numeric_limits<double>::infinity();
    if (shifts.all_zero()) {
        out.monomial_bound = tmin > 0.0
                                 ? std::pow(1.0 / tmin, shifts.depth())
                                 : std::numeric_limits<double>::infinity();
    }
    return out;
}

double lemma2_check(const SolveReport& report, const ShiftSchedule& shifts, int j) {
    const int l = shifts.depth();
    if (report.segments.empty())
        throw DimensionMismatchError("report has no retained basis transformation");
    const PlcgSegment& seg = report.segments.front();
    if (j < l + 1 || j > seg.lanczos.dim() || j > seg.basis_transform.dim() - 1)
        throw DimensionMismatchError("iteration j outside the retained prefix");

    const DenseMatrix p = shifted_poly_apply(seg.lanczos.leading(j), shifts);
    double discrepancy = 0.0;
    for (int r = 0; r < j - l; ++r) {
        for (int c = 0; c < j - l; ++c) {
            // Row shift by l: the exact V^T_{l+1:j} V_{1:j} operator selects
            // row l+r of P_l(H_{j,j}).
            const double lhs = seg.basis_transform.get(l + r, l + c);
            const double rhs = p.at(l + r, c);
            discrepancy = std::max(discrepancy, std::fabs(lhs - rhs));
        }
    }
    return discrepancy;
}

BoundsTable table1_grid(const LinearSystem& system, std::span<const int> l_values,
                        std::span<const int> j_values,
                        const std::function<ShiftSchedule(int)>& make_shifts) {
    BoundsTable table;
    int max_j = 1;
    for (int j : j_values) max_j = std::max(max_j, j);

    for (int l : l_values) {
        SolverConfig config;
        config.max_iters = max_j;
        config.tolerance = 0.0;
        config.pipeline_depth = l;
        config.shifts = make_shifts(l);
        config.restart_policy = RestartPolicy::restart_on_breakdown;
        const SolveReport report = plcg_solve(system, config);

        // Samples come from the pre-breakdown prefix only; iterations past a
        // square root breakdown have no transformation data (the series gets
        // a gap, matching how the norm traces omit singular iterations).
        const PlcgSegment& seg = report.segments.front();
        for (int j : j_values) {
            BoundsCell cell;
            cell.l = l;
            cell.j = j;
            if (j <= seg.lanczos.dim()) {
                const BandedUpperTri prefix = seg.basis_transform.prefix(j);
                try {
                    cell.measured = max_abs_norm(invert_upper_triangular(prefix));
                    cell.two_norm_bound = inverse_two_norm(prefix);
                } catch (const SingularMatrixError&) {
                }
                const LemmaBounds bounds =
                    lemma_bounds(seg.lanczos.leading(j), config.shifts);
                cell.ritz_bound = bounds.ritz_bound;
                cell.monomial_bound = bounds.monomial_bound;
            }
            table.cells.push_back(cell);
        }
    }
    return table;
}

}  // namespace pipecg
