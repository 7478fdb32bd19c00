#include <cmath>

#include "pipecg/solvers.hpp"

namespace pipecg {

SolveReport pcg_solve(const LinearSystem& system, const SolverConfig& config,
                      SolveObserver* observer) {
    const SparseMatrixCsr& A = system.A;
    SolveReport report;

    DenseVector x = system.x0;
    DenseVector t = spmv(A, x);
    DenseVector r = subtract(system.b, t);
    DenseVector w = spmv(A, r);

    const std::size_t n = r.size();
    DenseVector aw(n), z(n), s(n), p(n);

    const double r0_norm = std::sqrt(dot(r, r));
    double gamma_prev = 0.0, alpha_prev = 0.0;

    for (int i = 0; i <= config.max_iters; ++i) {
        const double gamma = dot(r, r);
        const double delta = dot(w, r);
        spmv(A, w, aw);
        const double rec_res = std::sqrt(gamma);
        report.iterations = i;

        if (r0_norm > 0.0 && rec_res / r0_norm < config.tolerance) {
            // Stopping test fires before the scalar updates; this iteration's
            // directions are never formed.
            report.rec_res_norms.push_back(rec_res);
            report.alphas.push_back(std::numeric_limits<double>::quiet_NaN());
            report.betas.push_back(std::numeric_limits<double>::quiet_NaN());
            if (observer) {
                IterationSnapshot snap;
                snap.method = Method::pcg;
                snap.iter = i;
                snap.rec_res_norm = rec_res;
                snap.x = &x;
                snap.r = &r;
                snap.w = &w;
                observer->on_iteration(snap);
            }
            report.converged = true;
            report.outcome = SolveOutcome::converged;
            break;
        }

        double alpha, beta;
        if (i > 0) {
            if (gamma == 0.0)
                throw BreakdownError("zero residual norm in alpha update", i);
            beta = gamma / gamma_prev;
            const double denom = delta / gamma - beta / alpha_prev;
            if (denom == 0.0)
                throw BreakdownError("zero denominator in alpha update", i);
            alpha = 1.0 / denom;
        } else {
            beta = 0.0;
            if (delta == 0.0)
                throw BreakdownError("zero (w_0, r_0) in alpha update", 0);
            alpha = gamma / delta;
        }

        xpby_inplace(aw, beta, z);
        xpby_inplace(w, beta, s);
        xpby_inplace(r, beta, p);

        report.rec_res_norms.push_back(rec_res);
        report.alphas.push_back(alpha);
        report.betas.push_back(beta);
        if (observer) {
            IterationSnapshot snap;
            snap.method = Method::pcg;
            snap.iter = i;
            snap.rec_res_norm = rec_res;
            snap.alpha = alpha;
            snap.beta = beta;
            snap.x = &x;
            snap.r = &r;
            snap.p = &p;
            snap.s = &s;
            snap.w = &w;
            snap.z = &z;
            observer->on_iteration(snap);
        }
        if (i == config.max_iters) break;

        axpy_inplace(alpha, p, x);
        axpy_inplace(-alpha, s, r);
        axpy_inplace(-alpha, z, w);
        gamma_prev = gamma;
        alpha_prev = alpha;
    }

    report.x = std::move(x);
    return report;
}

}  // namespace pipecg
