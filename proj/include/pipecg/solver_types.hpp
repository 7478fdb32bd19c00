#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pipecg/dense_vector.hpp"
#include "pipecg/shifts.hpp"
#include "pipecg/triangular.hpp"
#include "pipecg/tridiag.hpp"

namespace pipecg {

enum class Method { cg, pcg, plcg };

enum class RecurrenceMode { standard, stabilized };
enum class RestartPolicy { restart_on_breakdown, fail_on_breakdown };
enum class SolveOutcome { converged, max_iterations, breakdown };

/// Linear, symmetric positive definite action realizing M^{-1} v.
struct Preconditioner {
    std::function<void(const DenseVector&, DenseVector&)> apply;
};

struct SolverConfig {
    int max_iters = 100;
    double tolerance = 1e-8;  // relative recursive-residual criterion
    int pipeline_depth = 1;   // plcg only
    ShiftSchedule shifts;     // plcg only; length must equal pipeline_depth
    RecurrenceMode recurrence_mode = RecurrenceMode::standard;
    RestartPolicy restart_policy = RestartPolicy::restart_on_breakdown;
    std::optional<Preconditioner> preconditioner;
};

/// Square root breakdown that was recovered by restarting.
struct RestartEvent {
    int iteration;         // cumulative solution-update index consumed by the event
    double root_argument;  // the nonpositive value under the square root
};

struct BreakdownEvent {
    int iteration;
    double root_argument;
};

/// Per-iteration view of the solver state handed to observers. Pointers are
/// valid only during the callback; scalars that do not apply to the method
/// are NaN and vectors that do not apply (or are not yet defined on the
/// iteration where the stopping test fires) are null.
struct IterationSnapshot {
    Method method{};
    int iter = 0;  // solution-update index, cumulative across restarts
    double rec_res_norm = 0.0;

    // cg / pcg
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    const DenseVector* x = nullptr;
    const DenseVector* r = nullptr;
    const DenseVector* p = nullptr;
    const DenseVector* s = nullptr;
    const DenseVector* w = nullptr;
    const DenseVector* z = nullptr;

    // plcg
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    double eta = std::numeric_limits<double>::quiet_NaN();
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double zeta = std::numeric_limits<double>::quiet_NaN();
    const DenseVector* v_prev = nullptr;  // v_{a-1}
    const DenseVector* v_cur = nullptr;   // v_a
    const DenseVector* v_next = nullptr;  // v_{a+1}
    const SymTridiag* lanczos = nullptr;           // gamma_0..a, delta_0..a
    const BandedUpperTri* basis_transform = nullptr;  // columns 0..a+1 final
};

/// Synchronous observer; implementations must not mutate solver state.
class SolveObserver {
public:
    virtual ~SolveObserver() = default;
    virtual void on_iteration(const IterationSnapshot& snapshot) = 0;
    virtual void on_restart(const RestartEvent&) {}
    /// plcg only: auxiliary basis vector z_k right after it is finalized.
    virtual void on_auxiliary_vector(int /*index*/, const DenseVector& /*z*/) {}
};

/// Fans one solver run out to several observers, in order.
class ObserverChain : public SolveObserver {
public:
    void add(SolveObserver* observer) { observers_.push_back(observer); }
    void on_iteration(const IterationSnapshot& snapshot) override {
        for (auto* o : observers_) o->on_iteration(snapshot);
    }
    void on_restart(const RestartEvent& event) override {
        for (auto* o : observers_) o->on_restart(event);
    }
    void on_auxiliary_vector(int index, const DenseVector& z) override {
        for (auto* o : observers_) o->on_auxiliary_vector(index, z);
    }

private:
    std::vector<SolveObserver*> observers_;
};

/// One restart segment of a plcg run: the Lanczos matrix and basis
/// transformation built since the segment started.
struct PlcgSegment {
    int first_record = 0;  // cumulative index of the segment's first snapshot
    SymTridiag lanczos;
    BandedUpperTri basis_transform;
};

struct SolveReport {
    DenseVector x;
    bool converged = false;
    SolveOutcome outcome = SolveOutcome::max_iterations;
    int iterations = 0;  // index of the last emitted snapshot
    std::vector<RestartEvent> restarts;
    std::optional<BreakdownEvent> breakdown;

    std::vector<double> rec_res_norms;  // one per snapshot
    std::vector<double> alphas, betas;  // cg / pcg scalar history
    std::vector<PlcgSegment> segments;  // plcg basis history
};

}  // namespace pipecg
