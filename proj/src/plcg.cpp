#include <algorithm>
#include <cassert>
#include <cmath>

#include "pipecg/solvers.hpp"

namespace pipecg {

namespace {

/// Ring buffer of equally sized vectors indexed by a global position.
class VecRing {
public:
    VecRing(int slots, std::size_t n) : vecs_(slots, DenseVector(n)) {}
    DenseVector& at(int k) { return vecs_[mod(k)]; }
    const DenseVector& at(int k) const { return vecs_[mod(k)]; }

private:
    std::size_t mod(int k) const {
        assert(k >= 0);
        return static_cast<std::size_t>(k % static_cast<int>(vecs_.size()));
    }
    std::vector<DenseVector> vecs_;
};

enum class SegmentStatus { finished, breakdown };

struct SegmentResult {
    SegmentStatus status = SegmentStatus::finished;
    int fail_record = 0;       // local solution index where the sqrt failed
    double root_argument = 0;  // its nonpositive argument
};

struct PlcgRun {
    const LinearSystem& system;
    const SolverConfig& config;
    SolveObserver* observer;
    SolveReport& report;

    const int l;
    const bool preconditioned;
    VecRing v_ring;
    VecRing z_ring;
    VecRing zhat_ring;
    VecRing p_ring;
    DenseVector x;
    DenseVector scratch;
    DenseVector scratch2;

    SymTridiag lanczos;       // gamma_0..a, delta_0..a of the current segment
    BandedUpperTri transform;  // basis transformation of the current segment

    PlcgRun(const LinearSystem& sys, const SolverConfig& cfg, SolveObserver* obs,
            SolveReport& rep)
        : system(sys), config(cfg), observer(obs), report(rep),
          l(cfg.pipeline_depth),
          preconditioned(cfg.preconditioner.has_value()),
          v_ring(2 * l + 1, sys.b.size()),
          z_ring(l + 2, sys.b.size()),
          zhat_ring(preconditioned ? l + 2 : 1, preconditioned ? sys.b.size() : 0),
          p_ring(2, sys.b.size()),
          x(sys.x0),
          scratch(sys.b.size()),
          scratch2(sys.b.size()) {}

    // One pipeline segment starting from the current x. `base` is the
    // cumulative index assigned to the segment's first solution update.
    SegmentResult run_segment(int base) {
        const SparseMatrixCsr& A = system.A;
        const std::vector<double>& sigma = config.shifts.shifts;
        const bool stabilized = config.recurrence_mode == RecurrenceMode::stabilized;

        lanczos.clear();
        transform = BandedUpperTri(2 * l + 1);
        transform.append_column();
        transform.set(0, 0, 1.0);

        // r_0 explicitly, then the normalized seed of both bases.
        spmv(A, x, scratch);
        DenseVector r0 = subtract(system.b, scratch);
        double r0_norm;
        if (preconditioned) {
            DenseVector& rhat0 = scratch;
            rhat0 = r0;
            config.preconditioner->apply(rhat0, r0);
            r0_norm = std::sqrt(dot(r0, rhat0));
        } else {
            r0_norm = std::sqrt(dot(r0, r0));
        }
        if (!(r0_norm > 0.0)) {
            report.converged = true;
            report.outcome = SolveOutcome::converged;
            return {SegmentStatus::finished, 0, 0.0};
        }
        kernels::divided_copy(r0.span(), r0_norm, v_ring.at(0).span());
        z_ring.at(0) = v_ring.at(0);
        if (preconditioned)
            kernels::divided_copy(scratch.span(), r0_norm, zhat_ring.at(0).span());
        if (observer) observer->on_auxiliary_vector(0, z_ring.at(0));

        double eta_prev = 0.0, zeta_prev = 0.0;

        for (int i = 0;; ++i) {
            const int a = i - l;

            // Next auxiliary vector, raw.
            DenseVector& znew = z_ring.at(i + 1);
            if (preconditioned) {
                DenseVector& zhat_new = zhat_ring.at(i + 1);
                spmv(A, z_ring.at(i), zhat_new);
                if (i < l) axpy_inplace(-sigma[i], zhat_ring.at(i), zhat_new);
                config.preconditioner->apply(zhat_new, znew);
            } else {
                spmv(A, z_ring.at(i), znew);
                if (i < l) axpy_inplace(-sigma[i], z_ring.at(i), znew);
            }

            if (a >= 0) {
                // Turn the buffered dot products of column a+1 into
                // transformation entries (Gram-Schmidt style corrections).
                const int lo = std::max(0, a + 1 - 2 * l);
                for (int j = std::max(0, a - l + 2); j <= a; ++j) {
                    double sum = 0.0;
                    for (int k = lo; k < j; ++k)
                        sum += transform.get(k, j) * transform.get(k, a + 1);
                    transform.set(j, a + 1,
                                  (transform.get(j, a + 1) - sum) / transform.get(j, j));
                }
                double square_sum = 0.0;
                for (int k = lo; k <= a; ++k) {
                    const double g = transform.get(k, a + 1);
                    square_sum += g * g;
                }
                const double root_arg = transform.get(a + 1, a + 1) - square_sum;
                if (!(root_arg > 0.0))
                    return {SegmentStatus::breakdown, a, root_arg};
                transform.set(a + 1, a + 1, std::sqrt(root_arg));

                const double gaa = transform.get(a, a);
                double gam, del;
                if (a < l) {
                    gam = (transform.get(a, a + 1) + sigma[a] * gaa -
                           (a >= 1 ? lanczos.delta(a - 1) * transform.get(a - 1, a) : 0.0)) /
                          gaa;
                    del = transform.get(a + 1, a + 1) / gaa;
                } else {
                    gam = (gaa * lanczos.gamma(a - l) +
                           transform.get(a, a + 1) * lanczos.delta(a - l) -
                           lanczos.delta(a - 1) * transform.get(a - 1, a)) /
                          gaa;
                    del = transform.get(a + 1, a + 1) * lanczos.delta(a - l) / gaa;
                }
                lanczos.push(gam, del);

                DenseVector& vnew = v_ring.at(a + 1);
                if (!stabilized) {
                    vnew = z_ring.at(a + 1);
                    for (int j = std::max(0, a - 2 * l + 1); j <= a; ++j)
                        axpy_inplace(-transform.get(j, a + 1), v_ring.at(j), vnew);
                    kernels::divide_inplace(transform.get(a + 1, a + 1), vnew.span());
                } else {
                    spmv(A, v_ring.at(a), scratch);
                    if (preconditioned) {
                        config.preconditioner->apply(scratch, scratch2);
                        vnew = scratch2;
                    } else {
                        vnew = scratch;
                    }
                    axpy_inplace(-gam, v_ring.at(a), vnew);
                    if (a >= 1) axpy_inplace(-lanczos.delta(a - 1), v_ring.at(a - 1), vnew);
                    if (del == 0.0) throw BreakdownError("zero delta in basis recurrence", base + a);
                    kernels::divide_inplace(del, vnew.span());
                }

                axpy_inplace(-gam, z_ring.at(i), znew);
                if (a >= 1) axpy_inplace(-lanczos.delta(a - 1), z_ring.at(i - 1), znew);
                kernels::divide_inplace(del, znew.span());
                if (preconditioned) {
                    DenseVector& zhat_new = zhat_ring.at(i + 1);
                    axpy_inplace(-gam, zhat_ring.at(i), zhat_new);
                    if (a >= 1) axpy_inplace(-lanczos.delta(a - 1), zhat_ring.at(i - 1), zhat_new);
                    kernels::divide_inplace(del, zhat_new.span());
                }
            }
            if (observer) observer->on_auxiliary_vector(i + 1, znew);

            // Dot products filling column i+1 (the global reduction).
            while (transform.dim() < i + 2) transform.append_column();
            const DenseVector& zdot = preconditioned ? zhat_ring.at(i + 1) : znew;
            if (a < 0) {
                for (int j = 0; j <= i + 1; ++j)
                    transform.set(j, i + 1, dot(zdot, z_ring.at(j)));
            } else {
                for (int j = std::max(0, i - 2 * l + 1); j <= a + 1; ++j)
                    transform.set(j, i + 1, dot(zdot, v_ring.at(j)));
                for (int j = a + 2; j <= i + 1; ++j)
                    transform.set(j, i + 1, dot(zdot, z_ring.at(j)));
            }

            if (a < 0) continue;

            // Solution update and stopping test.
            double eta, lambda, zeta;
            if (a == 0) {
                lambda = std::numeric_limits<double>::quiet_NaN();
                eta = lanczos.gamma(0);
                zeta = r0_norm;
                if (eta == 0.0) throw BreakdownError("zero eta_0", base);
                kernels::divided_copy(v_ring.at(0).span(), eta, p_ring.at(0).span());
            } else {
                lambda = lanczos.delta(a - 1) / eta_prev;
                eta = lanczos.gamma(a) - lambda * lanczos.delta(a - 1);
                zeta = -lambda * zeta_prev;
                if (eta == 0.0) throw BreakdownError("zero eta in search direction update", base + a);
                DenseVector& pa = p_ring.at(a);
                pa = v_ring.at(a);
                axpy_inplace(-lanczos.delta(a - 1), p_ring.at(a - 1), pa);
                kernels::divide_inplace(eta, pa.span());
                axpy_inplace(zeta_prev, p_ring.at(a - 1), x);
            }
            eta_prev = eta;
            zeta_prev = zeta;

            const double rec_res = std::fabs(zeta);
            const int record = base + a;
            report.rec_res_norms.push_back(rec_res);
            report.iterations = record;
            if (observer) {
                IterationSnapshot snap;
                snap.method = Method::plcg;
                snap.iter = record;
                snap.rec_res_norm = rec_res;
                snap.gamma = lanczos.gamma(a);
                snap.delta = lanczos.delta(a);
                snap.eta = eta;
                snap.lambda = lambda;
                snap.zeta = zeta;
                snap.x = &x;
                snap.p = &p_ring.at(a);
                snap.v_prev = a >= 1 ? &v_ring.at(a - 1) : nullptr;
                snap.v_cur = &v_ring.at(a);
                snap.v_next = &v_ring.at(a + 1);
                snap.lanczos = &lanczos;
                snap.basis_transform = &transform;
                observer->on_iteration(snap);
            }

            if (rec_res / r0_norm < config.tolerance) {
                report.converged = true;
                report.outcome = SolveOutcome::converged;
                return {SegmentStatus::finished, a, 0.0};
            }
            if (record == config.max_iters) return {SegmentStatus::finished, a, 0.0};
        }
    }
};

}  // namespace

SolveReport plcg_solve(const LinearSystem& system, const SolverConfig& config,
                       SolveObserver* observer) {
    const int l = config.pipeline_depth;
    if (l < 1) throw DimensionMismatchError("pipeline depth must be >= 1");
    if (config.shifts.depth() != l)
        throw DimensionMismatchError("shift schedule length must equal pipeline depth");

    SolveReport report;
    PlcgRun run(system, config, observer, report);

    int base = 0;
    for (;;) {
        const SegmentResult result = run.run_segment(base);
        if (result.status == SegmentStatus::finished) {
            report.segments.push_back({base, run.lanczos, run.transform});
            break;
        }
        const int fail_iter = base + result.fail_record;
        report.segments.push_back({base, run.lanczos, run.transform});
        if (config.restart_policy == RestartPolicy::fail_on_breakdown ||
            result.fail_record == 0) {
            // A breakdown on a segment's first update cannot be restarted
            // away: the retry would replay the same arithmetic.
            report.breakdown = BreakdownEvent{fail_iter, result.root_argument};
            report.outcome = SolveOutcome::breakdown;
            break;
        }
        report.restarts.push_back({fail_iter, result.root_argument});
        if (observer) observer->on_restart(report.restarts.back());
        base = fail_iter + 1;
    }

    report.x = run.x;
    return report;
}

}  // namespace pipecg
