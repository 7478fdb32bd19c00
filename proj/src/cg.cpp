#include <cmath>

#include "pipecg/solvers.hpp"

namespace pipecg {

SolveReport cg_solve(const LinearSystem& system, const SolverConfig& config,
                     SolveObserver* observer) {
    const SparseMatrixCsr& A = system.A;
    SolveReport report;

    DenseVector x = system.x0;
    DenseVector t = spmv(A, x);
    DenseVector r = subtract(system.b, t);
    DenseVector p = r;
    DenseVector s(r.size());

    double r_dot = dot(r, r);
    const double r0_norm = std::sqrt(r_dot);
    double beta = 0.0;

    for (int i = 0; i <= config.max_iters; ++i) {
        spmv(A, p, s);
        const double sp = dot(s, p);
        const double alpha = r_dot / sp;
        const double rec_res = std::sqrt(r_dot);

        report.rec_res_norms.push_back(rec_res);
        report.alphas.push_back(alpha);
        report.betas.push_back(beta);
        report.iterations = i;
        if (observer) {
            IterationSnapshot snap;
            snap.method = Method::cg;
            snap.iter = i;
            snap.rec_res_norm = rec_res;
            snap.alpha = alpha;
            snap.beta = beta;
            snap.x = &x;
            snap.r = &r;
            snap.p = &p;
            snap.s = &s;
            observer->on_iteration(snap);
        }

        if (r0_norm > 0.0 && rec_res / r0_norm < config.tolerance) {
            report.converged = true;
            report.outcome = SolveOutcome::converged;
            break;
        }
        if (i == config.max_iters) break;
        if (sp <= 0.0)
            throw IndefiniteOperatorError("(s_i, p_i) <= 0: operator not positive definite", i);

        axpy_inplace(alpha, p, x);
        axpy_inplace(-alpha, s, r);
        const double r_dot_next = dot(r, r);
        beta = r_dot_next / r_dot;
        xpby_inplace(r, beta, p);
        r_dot = r_dot_next;
    }

    report.x = std::move(x);
    return report;
}

Preconditioner jacobi_preconditioner(const SparseMatrixCsr& A) {
    std::vector<double> inv_diag(static_cast<std::size_t>(A.n()));
    for (int i = 0; i < A.n(); ++i) {
        const double d = A.at(i, i);
        if (!(d > 0.0))
            throw DimensionMismatchError("Jacobi preconditioner needs a positive diagonal");
        inv_diag[i] = 1.0 / d;
    }
    Preconditioner m;
    m.apply = [inv_diag = std::move(inv_diag)](const DenseVector& in, DenseVector& out) {
        if (out.size() != in.size()) out = DenseVector(in.size());
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * inv_diag[i];
    };
    return m;
}

}  // namespace pipecg
