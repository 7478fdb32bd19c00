// Acceptance suite: runs the desk-scale reproduction experiments end to end
// and prints one pass/fail line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "pipecg/cli.hpp"
#include "pipecg/diagnostics.hpp"
#include "pipecg/solvers.hpp"

using namespace pipecg;
using namespace pipecg::testing;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": "
              << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << std::endl;
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

bool within_decade(double value, double reference) {
    return value >= 0.1 * reference && value <= 10.0 * reference;
}

struct PlcgRunData {
    int l = 0;
    RecurrenceMode mode = RecurrenceMode::standard;
    SolveReport report;
    std::vector<double> true_res;
    std::vector<double> basis_gap;
    std::vector<double> residual_gap;
};

PlcgRunData run_plcg(const LinearSystem& sys, int l, RecurrenceMode mode,
                     int max_iters, const ShiftSchedule& shifts) {
    PlcgRunData data;
    data.l = l;
    data.mode = mode;
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.tolerance = 0.0;
    cfg.pipeline_depth = l;
    cfg.shifts = shifts;
    cfg.recurrence_mode = mode;
    TrueResidualObserver true_res(sys);
    PlcgBasisGapObserver basis(sys);
    PlcgResidualGapObserver resid(sys, basis);
    ObserverChain chain;
    chain.add(&true_res);
    chain.add(&basis);
    chain.add(&resid);
    data.report = plcg_solve(sys, cfg, &chain);
    data.true_res = true_res.trace();
    data.basis_gap = basis.trace();
    data.residual_gap = resid.trace();
    return data;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const LinearSystem big = make_poisson_system(200, 200);
    const double bn = norm2(big.b);

    // ---- Criterion 1: stagnation levels after 500 iterations -------------
    SolverConfig classic;
    classic.max_iters = 500;
    classic.tolerance = 0.0;

    TrueResidualObserver cg_true(big);
    cg_solve(big, classic, &cg_true);
    const double cg_final = cg_true.trace().back();

    TrueResidualObserver pcg_true(big);
    pcg_solve(big, classic, &pcg_true);
    const double pcg_final = pcg_true.trace().back();

    std::map<int, PlcgRunData> standard_runs;
    for (int l : {1, 2, 3, 5, 10})
        standard_runs.emplace(l, run_plcg(big, l, RecurrenceMode::standard, 500,
                                          chebyshev_shifts(l, 0.0, 8.0)));

    {
        const std::map<std::string, std::pair<double, double>> targets = {
            {"cg", {cg_final, 4.47e-15}},   {"pcg", {pcg_final, 2.28e-11}},
            {"p1", {standard_runs.at(1).true_res.back(), 1.27e-13}},
            {"p2", {standard_runs.at(2).true_res.back(), 2.37e-12}},
            {"p3", {standard_runs.at(3).true_res.back(), 1.94e-09}},
            {"p5", {standard_runs.at(5).true_res.back(), 1.19e-08}},
        };
        bool pass = true;
        std::ostringstream detail;
        for (const auto& [name, pair] : targets) {
            const bool ok = pair.first >= pair.second * 1e-2 && pair.first <= pair.second * 1e2;
            pass = pass && ok;
            detail << name << "=" << fmt(pair.first) << (ok ? "" : "(!)") << " ";
        }
        const std::vector<double> chain = {
            cg_final, standard_runs.at(1).true_res.back(),
            standard_runs.at(2).true_res.back(), standard_runs.at(3).true_res.back(),
            standard_runs.at(5).true_res.back()};
        for (std::size_t k = 0; k + 1 < chain.size(); ++k)
            if (chain[k] > 10.0 * chain[k + 1]) {
                pass = false;
                detail << "ordering violated at link " << k << " ";
            }
        report(1, "stagnation-level reproduction", pass, detail.str());
    }

    // ---- Criterion 2: propagation norm/bound grid -------------------------
    {
        const std::vector<int> ls = {1, 2, 3, 4, 5, 10};
        const std::vector<int> js = {10, 50, 100, 200, 400};
        const BoundsTable table = table1_grid(
            big, ls, js, [](int l) { return chebyshev_shifts(l, 0.0, 8.0); });

        // Reference values: measured max norm and tabulated bound per (l, j).
        const std::map<std::pair<int, int>, std::pair<double, double>> reference = {
            {{1, 10}, {2.7e0, 8.2e0}},   {{1, 50}, {2.8e0, 2.5e1}},
            {{1, 100}, {2.8e0, 4.2e1}},  {{1, 200}, {3.2e0, 7.2e1}},
            {{1, 400}, {4.5e0, 1.3e2}},  {{2, 10}, {5.8e1, 1.2e2}},
            {{2, 50}, {5.8e1, 2.7e2}},   {{2, 100}, {5.8e1, 3.8e2}},
            {{2, 200}, {5.8e1, 5.4e2}},  {{2, 400}, {5.8e1, 7.3e2}},
            {{3, 10}, {1.6e2, 3.2e2}},   {{3, 50}, {1.6e2, 7.6e2}},
            {{3, 100}, {1.6e2, 1.1e3}},  {{3, 200}, {1.6e2, 1.5e3}},
            {{3, 400}, {1.8e2, 2.3e3}},  {{4, 10}, {3.3e2, 6.8e2}},
            {{4, 50}, {3.3e2, 1.5e3}},   {{4, 100}, {3.3e2, 2.2e3}},
            {{4, 200}, {3.3e2, 3.0e3}},  {{4, 400}, {3.3e2, 4.0e3}},
            {{5, 10}, {5.3e2, 1.0e3}},   {{5, 50}, {5.7e2, 2.6e3}},
            {{5, 100}, {5.7e2, 3.7e3}},  {{5, 200}, {5.7e2, 5.3e3}},
            {{5, 400}, {5.7e2, 6.9e3}},  {{10, 10}, {1.0e3, 1.6e3}},
            {{10, 50}, {3.2e3, 1.5e4}},  {{10, 100}, {3.2e3, 2.1e4}},
            {{10, 200}, {3.2e3, 3.0e4}}, {{10, 400}, {3.6e3, 4.2e4}},
        };

        bool pass = true;
        int with_data = 0;
        std::ostringstream detail;
        std::ostringstream skipped;
        for (const BoundsCell& cell : table.cells) {
            const auto [ref_measured, ref_bound] = reference.at({cell.l, cell.j});
            if (!cell.measured) {
                // A cell is allowed to carry no data only past a recorded
                // square root breakdown of that run (series gap convention).
                const PlcgRunData* run = standard_runs.count(cell.l)
                                             ? &standard_runs.at(cell.l)
                                             : nullptr;
                const bool explained =
                    run && !run->report.restarts.empty() &&
                    run->report.restarts.front().iteration < cell.j;
                if (!explained) {
                    pass = false;
                    detail << "missing (" << cell.l << "," << cell.j << ") ";
                } else {
                    skipped << "(" << cell.l << "," << cell.j << ") ";
                }
                continue;
            }
            ++with_data;
            if (!within_decade(*cell.measured, ref_measured)) {
                pass = false;
                detail << "measured(" << cell.l << "," << cell.j
                       << ")=" << fmt(*cell.measured) << " vs " << fmt(ref_measured)
                       << " ";
            }
            if (!cell.two_norm_bound || !within_decade(*cell.two_norm_bound, ref_bound)) {
                pass = false;
                detail << "bound(" << cell.l << "," << cell.j << ") off ";
            }
            if (cell.two_norm_bound && *cell.two_norm_bound < *cell.measured) {
                pass = false;
                detail << "bound<measured at (" << cell.l << "," << cell.j << ") ";
            }
            // Depth-one spot value of the Ritz-value bound.
            if (cell.l == 1 && cell.j == 10 && !within_decade(cell.ritz_bound, 8.2)) {
                pass = false;
                detail << "ritz(1,10)=" << fmt(cell.ritz_bound) << " ";
            }
        }
        if (with_data < 26) pass = false;
        detail << with_data << "/30 cells measured";
        if (skipped.str().size())
            detail << "; post-breakdown gaps at " << skipped.str();
        report(2, "propagation norm and bound grid reproduction", pass, detail.str());
    }

    // ---- Criterion 3: exact-arithmetic equivalence ------------------------
    {
        const LinearSystem mid = make_poisson_system(50, 50);
        SolverConfig cfg;
        cfg.max_iters = 30;
        cfg.tolerance = 0.0;
        const SolveReport cg = cg_solve(mid, cfg);
        const SolveReport pcg = pcg_solve(mid, cfg);
        double worst = 0.0;
        for (std::size_t k = 0; k < cg.rec_res_norms.size(); ++k)
            worst = std::max(worst, std::fabs(pcg.rec_res_norms[k] - cg.rec_res_norms[k]) /
                                        cg.rec_res_norms[k]);
        for (int l : {1, 2, 3}) {
            SolverConfig pc = cfg;
            pc.pipeline_depth = l;
            pc.shifts = chebyshev_shifts(l, 0.0, 8.0);
            const SolveReport rep = plcg_solve(mid, pc);
            for (std::size_t k = 0; k < cg.rec_res_norms.size(); ++k)
                worst = std::max(worst,
                                 std::fabs(rep.rec_res_norms[k] - cg.rec_res_norms[k]) /
                                     cg.rec_res_norms[k]);
        }
        report(3, "cg/pcg/plcg residual equivalence over 30 iterations", worst <= 1e-4,
               "max relative deviation " + fmt(worst) + " (bar 1e-4)");
    }

    // ---- Criterion 4: stabilized recurrence countermeasure ----------------
    std::map<int, PlcgRunData> stabilized_runs;
    {
        bool pass = true;
        std::ostringstream detail;
        for (int l : {1, 2, 3, 5, 10}) {
            stabilized_runs.emplace(l, run_plcg(big, l, RecurrenceMode::stabilized, 900,
                                                chebyshev_shifts(l, 0.0, 8.0)));
            const PlcgRunData& run = stabilized_runs.at(l);
            double max_gap = 0.0;
            for (double g : run.basis_gap) max_gap = std::max(max_gap, g);
            const double final_res = run.true_res.back();
            const bool ok = max_gap <= 1e-12 && final_res <= 10.0 * cg_final;
            pass = pass && ok;
            detail << "l=" << l << " gap=" << fmt(max_gap) << " final=" << fmt(final_res)
                   << (ok ? " " : "(!) ");
        }
        detail << "(cg " << fmt(cg_final) << ", 900 iterations to cover the "
               << "delayed convergence of the deep pipelines)";
        report(4, "stabilized recurrence: gap at rounding level, cg-level accuracy",
               pass, detail.str());
    }

    // ---- Criterion 5: structural identity of the transformation ----------
    {
        const LinearSystem mid = make_poisson_system(50, 50);
        bool pass = true;
        std::ostringstream detail;
        for (int l : {1, 2}) {
            SolverConfig cfg;
            cfg.max_iters = 25;
            cfg.tolerance = 0.0;
            cfg.pipeline_depth = l;
            cfg.shifts = chebyshev_shifts(l, 0.0, 8.0);
            const SolveReport rep = plcg_solve(mid, cfg);
            const double disc = lemma2_check(rep, cfg.shifts, 20);
            pass = pass && disc <= 1e-8;
            detail << "l=" << l << " discrepancy=" << fmt(disc) << " ";
        }
        report(5, "principal-submatrix identity at j=20", pass, detail.str() + "(bar 1e-8)");
    }

    // ---- Criterion 6: gap-formula reconstruction oracle -------------------
    {
        const LinearSystem small = small_spd_system();
        SolverConfig cfg;
        cfg.max_iters = 8;
        cfg.tolerance = 0.0;
        cfg.pipeline_depth = 1;
        cfg.shifts = monomial_shifts(1);
        PlcgHistory hist;
        PlcgBasisGapObserver basis(small, nullptr, true);
        ObserverChain chain;
        chain.add(&hist);
        chain.add(&basis);
        plcg_solve(small, cfg, &chain);
        const LongColumns rec = reconstruct_basis_gap(hist, small.A, cfg.shifts.shifts, 8);
        double worst = 0.0;
        for (int k = 0; k <= 8; ++k)
            for (int i = 0; i < small.A.n(); ++i)
                worst = std::max(worst, static_cast<double>(std::fabs(
                                            rec[k][i] - basis.gap_columns()[k][i])));
        report(6, "basis gap equals its local-error propagation formula", worst <= 1e-10,
               "max entry difference " + fmt(worst) + " (bar 1e-10)");
    }

    // ---- Criterion 7: residual-norm identity ------------------------------
    {
        bool pass = true;
        std::ostringstream detail;
        auto deviation = [&](const PlcgRunData& run) {
            double worst = 0.0;
            for (std::size_t k = 0; k < run.true_res.size(); ++k) {
                if (run.report.rec_res_norms[k] <= 1e-6 * bn) continue;
                worst = std::max(
                    worst, std::fabs(run.true_res[k] - run.report.rec_res_norms[k]));
            }
            return worst;
        };
        // Runs whose attainable accuracy permits the identity at the stated
        // tolerance: standard depths 1..3 and stabilized depths through 5.
        // The remaining runs stagnate (or approach a square root breakdown)
        // above that level -- the growing residual gap is the phenomenon
        // under study -- so for them the deviation must instead be fully
        // explained by the measured residual gap (the norm inequality of
        // the gap analysis).
        for (int l : {1, 2, 3}) {
            const double dev = deviation(standard_runs.at(l));
            if (dev > 1e-8 * bn) {
                pass = false;
                detail << "standard l=" << l << " dev=" << fmt(dev / bn) << "||b|| ";
            }
        }
        for (int l : {1, 2, 3, 5}) {
            const double dev = deviation(stabilized_runs.at(l));
            if (dev > 1e-8 * bn) {
                pass = false;
                detail << "stabilized l=" << l << " dev=" << fmt(dev / bn) << "||b|| ";
            }
        }
        auto gap_bounded = [&](const PlcgRunData& run, const std::string& label) {
            for (std::size_t k = 0; k < run.true_res.size(); ++k) {
                if (run.report.rec_res_norms[k] <= 1e-6 * bn) continue;
                const double dev =
                    std::fabs(run.true_res[k] - run.report.rec_res_norms[k]);
                if (dev > 1.1 * run.residual_gap[k] + 1e-8 * bn) {
                    pass = false;
                    detail << "unexplained deviation " << label << " iter=" << k << " ";
                    return;
                }
            }
        };
        gap_bounded(standard_runs.at(5), "standard l=5");
        gap_bounded(standard_runs.at(10), "standard l=10");
        gap_bounded(stabilized_runs.at(10), "stabilized l=10");
        report(7, "residual norm identity |b-Ax| vs |zeta|", pass,
               detail.str().empty()
                   ? "holds at 1e-8||b|| for standard l<=3 and stabilized l<=5; "
                     "remaining runs' deviations bounded by the measured residual gap"
                   : detail.str());
    }

    // ---- Criterion 8: breakdown and restart on sub-optimal shifts ---------
    {
        SolverConfig cfg;
        cfg.max_iters = 500;
        cfg.tolerance = 0.0;
        cfg.pipeline_depth = 3;
        cfg.shifts = chebyshev_shifts(3, 0.0, 8.0 * 1.005);
        TrueResidualObserver true_res(big);
        const SolveReport restarted = plcg_solve(big, cfg, &true_res);
        const bool had_event = !restarted.restarts.empty();
        const double final_res = true_res.trace().back();

        RunConfig cli;
        cli.problem = "poisson:200x200";
        cli.methods = {"plcg"};
        cli.pipeline_depth = 3;
        cli.shifts = "chebyshev:0,8.04";
        cli.tolerance = 0.0;
        cli.max_iters = 500;
        cli.on_breakdown = "fail";
        cli.diagnostics = "none";
        cli.no_header_meta = true;
        cli.output = "acceptance_breakdown.csv";
        const int exit_code = cmd_solve(cli);
        std::remove("acceptance_breakdown.csv");

        const bool pass = had_event && final_res <= 1e-8 * bn && exit_code == 3;
        std::ostringstream detail;
        detail << (had_event ? "breakdown at iter " + std::to_string(
                                   restarted.restarts.front().iteration)
                             : std::string("no breakdown within 500 iterations"))
               << ", restarted final=" << fmt(final_res) << " (bar " << fmt(1e-8 * bn)
               << "), fail-policy exit=" << exit_code;
        report(8, "square-root breakdown: restart recovers, fail exits 3", pass,
               detail.str());
    }

    // ---- Criterion 9: module property suites ------------------------------
    {
        bool pass = true;
        std::ostringstream detail;

        // Triangular inversion residual bound on random banded matrices.
        std::uint64_t state = 12345;
        auto rnd = [&state]() {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
        };
        double worst_resid = 0.0;
        for (int dim : {4, 9, 18}) {
            BandedUpperTri g(dim, 5);
            for (int c = 0; c < dim; ++c)
                for (int r = std::max(0, c - 4); r <= c; ++r)
                    g.set(r, c, r == c ? 1.0 + std::fabs(rnd()) : rnd());
            const DenseUpperTri inv = invert_upper_triangular(g);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    double sum = 0.0;
                    for (int k = r; k <= c; ++k) sum += g.get(r, k) * inv.get(k, c);
                    const double err = std::fabs(sum - (r == c ? 1.0 : 0.0)) /
                                       (max_abs_norm(g) * dim);
                    worst_resid = std::max(worst_resid, err);
                }
        }
        if (worst_resid > 1e-12) {
            pass = false;
            detail << "triangular residual " << fmt(worst_resid) << " ";
        }

        // Eigenvalue interlacing.
        std::vector<double> gam, del;
        for (int i = 0; i < 14; ++i) gam.push_back(3.0 + rnd());
        for (int i = 0; i < 13; ++i) del.push_back(1.0 + 0.5 * rnd());
        const SymTridiag h(gam, del);
        const auto big_eig = sym_tridiag_eigenvalues(h);
        const auto small_eig = sym_tridiag_eigenvalues(h.leading(13));
        for (int i = 0; i < 13; ++i)
            if (!(big_eig[i] <= small_eig[i] + 1e-10 &&
                  small_eig[i] <= big_eig[i + 1] + 1e-10)) {
                pass = false;
                detail << "interlacing violated ";
                break;
            }

        // Chebyshev shift symmetry, exact.
        for (int l = 1; l <= 10; ++l) {
            const ShiftSchedule s = chebyshev_shifts(l, 0.0, 8.0);
            for (int i = 0; i < l; ++i)
                if (s.shifts[i] + s.shifts[l - 1 - i] != 8.0 || s.shifts[i] <= 0.0 ||
                    s.shifts[i] >= 8.0) {
                    pass = false;
                    detail << "shift symmetry violated ";
                    break;
                }
        }

        // Poisson spectrum containment via the dense eigenvalue oracle.
        for (int nx = 1; nx <= 6 && pass; ++nx)
            for (int ny = 1; ny <= 6; ++ny) {
                const auto eig = jacobi_eigenvalues(dense_from_csr(poisson2d(nx, ny)));
                if (!(eig.front() > 0.0 && eig.back() < 8.0)) {
                    pass = false;
                    detail << "spectrum outside (0,8) at " << nx << "x" << ny << " ";
                    break;
                }
            }

        report(9, "core property suites (inverse residual, interlacing, shifts, spectrum)",
               pass, detail.str().empty() ? "all hold" : detail.str());
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "total runtime " << fmt(elapsed) << " s (target < 120 s for criterion 1 set)"
              << std::endl;
    if (elapsed >= 120.0) {
        std::cout << "[FAIL] runtime target exceeded" << std::endl;
        ++failures;
    }
    return failures;
}
