#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pipecg/diagnostics.hpp"
#include "pipecg/solvers.hpp"

using namespace pipecg;
using namespace pipecg::testing;

namespace {

LinearSystem identity_system(std::vector<double> rhs) {
    const int n = static_cast<int>(rhs.size());
    std::vector<SparseMatrixCsr::Triplet> t;
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return LinearSystem{SparseMatrixCsr::from_triplets(n, std::move(t)),
                        DenseVector(std::move(rhs)), DenseVector(n, 0.0),
                        std::nullopt, std::nullopt};
}

SolverConfig plcg_config(int l, int max_iters, double tol = 0.0,
                         RecurrenceMode mode = RecurrenceMode::standard) {
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.tolerance = tol;
    cfg.pipeline_depth = l;
    cfg.shifts = chebyshev_shifts(l, 0.0, 8.0);
    cfg.recurrence_mode = mode;
    return cfg;
}

}  // namespace

TEST_CASE("cg solves the identity in one iteration") {
    const LinearSystem sys = identity_system({1.0, -2.5, 3.0});
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    cfg.max_iters = 10;
    const SolveReport rep = cg_solve(sys, cfg);
    CHECK(rep.converged);
    CHECK(rep.outcome == SolveOutcome::converged);
    CHECK(rep.iterations == 1);
    for (std::size_t i = 0; i < sys.b.size(); ++i) CHECK(rep.x[i] == sys.b[i]);
}

TEST_CASE("cg solves a 2x2 system exactly within two iterations") {
    const LinearSystem sys{
        SparseMatrixCsr::from_triplets(2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}),
        DenseVector{1.0, 2.0}, DenseVector(2, 0.0), std::nullopt, std::nullopt};
    SolverConfig cfg;
    cfg.tolerance = 1e-14;
    cfg.max_iters = 5;
    const SolveReport rep = cg_solve(sys, cfg);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 2);
    CHECK(rep.x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
    CHECK(rep.x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
}

TEST_CASE("cg rejects an indefinite operator") {
    const LinearSystem sys{
        SparseMatrixCsr::from_triplets(2, {{0, 0, 1.0}, {1, 1, -1.0}}),
        DenseVector{1.0, 1.0}, DenseVector(2, 0.0), std::nullopt, std::nullopt};
    SolverConfig cfg;
    cfg.tolerance = 1e-12;
    CHECK_THROWS_AS(cg_solve(sys, cfg), IndefiniteOperatorError);
}

TEST_CASE("pcg matches cg on the identity") {
    const LinearSystem sys = identity_system({2.0, 0.5, -1.0, 4.0});
    SolverConfig cfg;
    cfg.tolerance = 1e-10;
    cfg.max_iters = 10;
    const SolveReport rep = pcg_solve(sys, cfg);
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    for (std::size_t i = 0; i < sys.b.size(); ++i) CHECK(rep.x[i] == sys.b[i]);
}

TEST_CASE("pcg tracks cg residual norms through 30 iterations") {
    const LinearSystem sys = make_poisson_system(50, 50);
    SolverConfig cfg;
    cfg.tolerance = 0.0;
    cfg.max_iters = 30;
    const SolveReport cg = cg_solve(sys, cfg);
    const SolveReport pcg = pcg_solve(sys, cfg);
    REQUIRE(cg.rec_res_norms.size() == pcg.rec_res_norms.size());
    for (std::size_t k = 0; k < cg.rec_res_norms.size(); ++k) {
        CHECK(std::fabs(pcg.rec_res_norms[k] - cg.rec_res_norms[k]) <=
              1e-6 * cg.rec_res_norms[k]);
    }
}

TEST_CASE("plcg first residual norm is computed exactly as ||r_0||") {
    const LinearSystem sys = make_poisson_system(20, 20);
    const SolveReport rep = plcg_solve(sys, plcg_config(2, 5));
    CHECK(rep.rec_res_norms.front() == norm2(sys.b));
}

TEST_CASE("plcg matches cg residual norms for depths 1..3") {
    const LinearSystem sys = make_poisson_system(50, 50);
    SolverConfig cg_cfg;
    cg_cfg.tolerance = 0.0;
    cg_cfg.max_iters = 30;
    const SolveReport cg = cg_solve(sys, cg_cfg);
    for (int l : {1, 2, 3}) {
        const SolveReport rep = plcg_solve(sys, plcg_config(l, 30));
        REQUIRE(rep.rec_res_norms.size() == cg.rec_res_norms.size());
        for (std::size_t k = 0; k < cg.rec_res_norms.size(); ++k)
            CHECK(std::fabs(rep.rec_res_norms[k] - cg.rec_res_norms[k]) <=
                  1e-6 * cg.rec_res_norms[k]);
    }
}

TEST_CASE("plcg basis satisfies the Lanczos relation and stays orthonormal early") {
    const LinearSystem sys = make_poisson_system(50, 50);
    PlcgHistory history;
    plcg_solve(sys, plcg_config(2, 30), &history);

    const int j = 30;
    double relation = 0.0;
    for (int k = 0; k < j; ++k) {
        DenseVector av = spmv(sys.A, history.v[k]);
        axpy_inplace(-history.lanczos.gamma(k), history.v[k], av);
        if (k >= 1) axpy_inplace(-history.lanczos.delta(k - 1), history.v[k - 1], av);
        axpy_inplace(-history.lanczos.delta(k), history.v[k + 1], av);
        for (std::size_t idx = 0; idx < av.size(); ++idx)
            relation = std::max(relation, std::fabs(av[idx]));
    }
    CHECK(relation <= 1e-8);

    double ortho = 0.0;
    for (int m = 0; m <= j; ++m) {
        CHECK(norm2(history.v[m]) == doctest::Approx(1.0).epsilon(1e-8));
        for (int k = m + 1; k <= j; ++k)
            ortho = std::max(ortho, std::fabs(dot(history.v[m], history.v[k])));
    }
    CHECK(ortho <= 1e-8);
}

TEST_CASE("basis transformation is banded with exact zeros outside") {
    const LinearSystem sys = make_poisson_system(30, 30);
    PlcgHistory history;
    plcg_solve(sys, plcg_config(2, 20), &history);
    const BandedUpperTri& g = history.transform;
    CHECK(g.bandwidth() == 5);
    for (int c = 0; c < g.dim(); ++c) {
        for (int r = 0; r < c - 4; ++r) CHECK(g.get(r, c) == 0.0);
        for (int r = c + 1; r < g.dim(); ++r) CHECK(g.get(r, c) == 0.0);
    }
    CHECK(g.get(0, 0) == 1.0);
}

TEST_CASE("recursive residual norm tracks the true residual") {
    const LinearSystem sys = make_poisson_system(50, 50);
    TrueResidualObserver true_res(sys);
    const SolveReport rep = plcg_solve(sys, plcg_config(2, 60), &true_res);
    const double bn = norm2(sys.b);
    for (std::size_t k = 0; k < rep.rec_res_norms.size(); ++k) {
        if (rep.rec_res_norms[k] <= 1e-6 * bn) continue;
        CHECK(std::fabs(true_res.trace()[k] - rep.rec_res_norms[k]) <= 1e-8 * bn);
    }
}

TEST_CASE("stabilized recurrence keeps the basis gap at rounding level") {
    const LinearSystem sys = make_poisson_system(50, 50);
    PlcgBasisGapObserver gaps(sys);
    plcg_solve(sys, plcg_config(3, 80, 0.0, RecurrenceMode::stabilized), &gaps);
    for (double g : gaps.trace()) CHECK(g <= 1e-12);
}

TEST_CASE("square root breakdown restarts and keeps the residual continuous") {
    // Deliberately poor shifts on a mismatched interval provoke the breakdown.
    const LinearSystem sys = make_poisson_system(40, 40);
    SolverConfig cfg = plcg_config(6, 400);
    cfg.shifts = chebyshev_shifts(6, 0.0, 8.0 * 1.005);
    cfg.pipeline_depth = 6;
    TrueResidualObserver true_res(sys);
    const SolveReport rep = plcg_solve(sys, cfg, &true_res);
    REQUIRE(!rep.restarts.empty());
    CHECK(rep.restarts.front().root_argument <= 0.0);

    // Records skip each event index; residual continuity at the restart.
    const int fail_iter = rep.restarts.front().iteration;
    int record_index = 0;
    std::size_t record_pos = 0;
    while (record_index != fail_iter + 1) {
        if (record_index != fail_iter) ++record_pos;
        ++record_index;
    }
    const double rec = rep.rec_res_norms[record_pos];
    const double truth = true_res.trace()[record_pos];
    CHECK(std::fabs(rec - truth) <= 1e-12 * truth);
}

TEST_CASE("fail policy surfaces the breakdown instead of restarting") {
    const LinearSystem sys = make_poisson_system(40, 40);
    SolverConfig cfg = plcg_config(6, 400);
    cfg.shifts = chebyshev_shifts(6, 0.0, 8.0 * 1.005);
    cfg.restart_policy = RestartPolicy::fail_on_breakdown;
    const SolveReport rep = plcg_solve(sys, cfg);
    CHECK(rep.outcome == SolveOutcome::breakdown);
    CHECK(rep.breakdown.has_value());
    CHECK(rep.breakdown->root_argument <= 0.0);
    CHECK(!rep.converged);
}

TEST_CASE("tolerance zero runs to max_iters without converging") {
    const LinearSystem sys = make_poisson_system(20, 20);
    const SolveReport rep = plcg_solve(sys, plcg_config(1, 25));
    CHECK(!rep.converged);
    CHECK(rep.outcome == SolveOutcome::max_iterations);
    CHECK(rep.iterations == 25);
    CHECK(rep.rec_res_norms.size() == 26);
}

TEST_CASE("jacobi preconditioner basics") {
    const SparseMatrixCsr two_eye =
        SparseMatrixCsr::from_triplets(2, {{0, 0, 2.0}, {1, 1, 2.0}});
    const Preconditioner m = jacobi_preconditioner(two_eye);
    DenseVector out;
    m.apply(DenseVector{2.0, 4.0}, out);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 2.0);

    const SparseMatrixCsr indef =
        SparseMatrixCsr::from_triplets(2, {{0, 0, 1.0}, {1, 1, -2.0}});
    CHECK_THROWS_AS(jacobi_preconditioner(indef), DimensionMismatchError);

    const Preconditioner eye = jacobi_preconditioner(
        SparseMatrixCsr::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}}));
    DenseVector same;
    eye.apply(DenseVector{3.0, -7.0}, same);
    CHECK(same[0] == 3.0);
    CHECK(same[1] == -7.0);
}

TEST_CASE("identity preconditioner reproduces the unpreconditioned run bit for bit") {
    const LinearSystem sys = make_poisson_system(30, 30);
    const SolveReport plain = plcg_solve(sys, plcg_config(2, 40));

    SolverConfig cfg = plcg_config(2, 40);
    cfg.preconditioner = Preconditioner{[](const DenseVector& in, DenseVector& out) {
        out = in;
    }};
    const SolveReport precond = plcg_solve(sys, cfg);

    REQUIRE(plain.rec_res_norms.size() == precond.rec_res_norms.size());
    for (std::size_t k = 0; k < plain.rec_res_norms.size(); ++k)
        CHECK(plain.rec_res_norms[k] == precond.rec_res_norms[k]);
    for (std::size_t i = 0; i < plain.x.size(); ++i) CHECK(plain.x[i] == precond.x[i]);
}

TEST_CASE("jacobi-preconditioned plcg converges at least as fast") {
    const LinearSystem sys = make_poisson_system(50, 50);
    SolverConfig cfg = plcg_config(2, 400, 1e-8);
    const SolveReport plain = plcg_solve(sys, cfg);
    // Shifts live on the spectrum of the preconditioned operator M^{-1}A,
    // which for the unit-scaled Jacobi of this stencil is (0, 2).
    cfg.shifts = chebyshev_shifts(2, 0.0, 2.0);
    cfg.preconditioner = jacobi_preconditioner(sys.A);
    const SolveReport precond = plcg_solve(sys, cfg);
    CHECK(plain.converged);
    CHECK(precond.converged);
    CHECK(precond.iterations <= plain.iterations);

    // The recursive residual is an M-norm; check against the true residual.
    DenseVector r = subtract(sys.b, spmv(sys.A, precond.x));
    DenseVector minv_r;
    cfg.preconditioner->apply(r, minv_r);
    const double m_norm = std::sqrt(dot(minv_r, r));
    CHECK(m_norm <= 2e-8 * norm2(sys.b));
}

TEST_CASE("pipeline depth exceeding the iteration budget still works") {
    const LinearSystem sys = make_poisson_system(8, 8);
    const SolveReport rep = plcg_solve(sys, plcg_config(3, 2));
    CHECK(rep.iterations == 2);
    CHECK(rep.rec_res_norms.size() == 3);
    CHECK(rep.segments.front().lanczos.dim() == 3);
}

TEST_CASE("solvers recover the constructed solution") {
    const LinearSystem sys = make_poisson_system(20, 20);
    SolverConfig cfg;
    cfg.tolerance = 1e-12;
    cfg.max_iters = 400;
    for (const SolveReport& rep :
         {cg_solve(sys, cfg), pcg_solve(sys, cfg),
          plcg_solve(sys, plcg_config(2, 400, 1e-12))}) {
        REQUIRE(rep.converged);
        double err = 0.0;
        for (std::size_t i = 0; i < rep.x.size(); ++i)
            err = std::max(err, std::fabs(rep.x[i] - (*sys.x_true)[i]));
        CHECK(err <= 1e-9);
    }
}

TEST_CASE("solver reports retain the scalar history") {
    const LinearSystem sys = make_poisson_system(10, 10);
    SolverConfig cfg;
    cfg.tolerance = 0.0;
    cfg.max_iters = 12;
    const SolveReport cg = cg_solve(sys, cfg);
    CHECK(cg.alphas.size() == 13);
    CHECK(cg.betas.front() == 0.0);
    const SolveReport pcg = pcg_solve(sys, cfg);
    CHECK(pcg.alphas.size() == 13);
    const SolveReport plcg = plcg_solve(sys, plcg_config(2, 12));
    REQUIRE(plcg.segments.size() == 1);
    CHECK(plcg.segments.front().lanczos.dim() == 13);
    CHECK(plcg.segments.front().basis_transform.dim() >= 14);
}
