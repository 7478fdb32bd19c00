#include "pipecg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "pipecg/csv.hpp"
#include "pipecg/diagnostics.hpp"
#include "pipecg/solvers.hpp"

namespace pipecg {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

double parse_number(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw UsageError("malformed number: " + s);
    return v;
}

LinearSystem make_system(const RunConfig& rc) {
    const RhsMode mode = rc.rhs == "ones" ? RhsMode::ones : RhsMode::uniform_inv_sqrt_n;
    if (rc.problem.rfind("poisson:", 0) == 0) {
        const auto dims = split(rc.problem.substr(8), 'x');
        if (dims.size() != 2) throw UsageError("expected poisson:<nx>x<ny>");
        return make_poisson_system(static_cast<int>(parse_number(dims[0])),
                                   static_cast<int>(parse_number(dims[1])), mode);
    }
    if (rc.problem.rfind("mm:", 0) == 0) {
        SparseMatrixCsr A = load_matrix_market(rc.problem.substr(3));
        auto [b, x_true] = rhs_from_solution(A, mode);
        const std::size_t n = b.size();
        return LinearSystem{std::move(A), std::move(b), DenseVector(n, 0.0),
                            std::move(x_true), std::nullopt};
    }
    throw UsageError("unknown problem spec: " + rc.problem);
}

ShiftSchedule make_shift_schedule(const std::string& spec, int l) {
    if (spec == "monomial") return monomial_shifts(l);
    if (spec.rfind("chebyshev:", 0) == 0) {
        const auto parts = split(spec.substr(10), ',');
        if (parts.size() != 2) throw UsageError("expected chebyshev:<min>,<max>");
        return chebyshev_shifts(l, parse_number(parts[0]), parse_number(parts[1]));
    }
    if (spec.rfind("explicit:", 0) == 0) {
        ShiftSchedule s;
        s.basis_kind = BasisKind::user;
        for (const std::string& v : split(spec.substr(9), ','))
            s.shifts.push_back(parse_number(v));
        if (s.depth() != l)
            throw UsageError("explicit shift list length must equal pipeline depth");
        return s;
    }
    throw UsageError("unknown shift spec: " + spec);
}

struct MethodToken {
    Method method;
    int l = 0;  // plcg only
    std::string label;
};

MethodToken parse_method(const std::string& token, int default_l) {
    MethodToken m;
    if (token == "cg") {
        m.method = Method::cg;
        m.label = "cg";
    } else if (token == "pcg") {
        m.method = Method::pcg;
        m.label = "pcg";
    } else if (token == "plcg" || token.rfind("plcg:", 0) == 0) {
        m.method = Method::plcg;
        m.l = token == "plcg" ? default_l : static_cast<int>(parse_number(token.substr(5)));
        m.label = "plcg";
    } else {
        throw UsageError("unknown method: " + token);
    }
    return m;
}

/// Record indices in emission order: 0,1,2,... with event-consumed indices
/// skipped, so CSV rows stay strictly increasing.
std::vector<int> record_indices(const SolveReport& report) {
    std::set<int> consumed;
    for (const RestartEvent& e : report.restarts) consumed.insert(e.iteration);
    if (report.breakdown) consumed.insert(report.breakdown->iteration);
    std::vector<int> indices;
    indices.reserve(report.rec_res_norms.size());
    int idx = 0;
    while (indices.size() < report.rec_res_norms.size()) {
        if (!consumed.count(idx)) indices.push_back(idx);
        ++idx;
    }
    return indices;
}

struct TraceRow {
    int iter = 0;
    std::string method;
    std::optional<int> l;
    std::string mode;
    std::optional<double> rec_res, true_res, gap_f, gap_resid, ginv, ritz;
    std::string event;
};

std::optional<double> opt_at(const std::vector<double>& v, std::size_t i) {
    if (i >= v.size() || std::isnan(v[i])) return std::nullopt;
    return v[i];
}

struct RunResult {
    SolveReport report;
    std::vector<TraceRow> rows;
    int exit_code = 0;
};

int outcome_exit_code(const SolveReport& report) {
    switch (report.outcome) {
        case SolveOutcome::converged: return 0;
        case SolveOutcome::max_iterations: return 2;
        case SolveOutcome::breakdown: return 3;
    }
    return 1;
}

RunResult run_one(const MethodToken& token, const LinearSystem& system,
                  const RunConfig& rc) {
    SolverConfig config;
    config.max_iters = rc.max_iters;
    config.tolerance = rc.tolerance;
    config.recurrence_mode =
        rc.mode == "stabilized" ? RecurrenceMode::stabilized : RecurrenceMode::standard;
    config.restart_policy = rc.on_breakdown == "fail" ? RestartPolicy::fail_on_breakdown
                                                      : RestartPolicy::restart_on_breakdown;
    if (rc.mode != "standard" && rc.mode != "stabilized")
        throw UsageError("unknown mode: " + rc.mode);
    if (rc.on_breakdown != "restart" && rc.on_breakdown != "fail")
        throw UsageError("unknown breakdown policy: " + rc.on_breakdown);
    if (token.method == Method::plcg) {
        config.pipeline_depth = token.l;
        config.shifts = make_shift_schedule(rc.shifts, token.l);
    }
    if (rc.preconditioner == "jacobi") {
        config.preconditioner = jacobi_preconditioner(system.A);
    } else if (rc.preconditioner != "none") {
        throw UsageError("unknown preconditioner: " + rc.preconditioner);
    }

    const bool want_true = rc.diagnostics != "none";
    const bool want_gaps = rc.diagnostics == "gaps" || rc.diagnostics == "all";
    const bool want_norms = rc.diagnostics == "norms" || rc.diagnostics == "all";

    ObserverChain chain;
    std::optional<TrueResidualObserver> true_res;
    std::optional<CgGapObserver> cg_gaps;
    std::optional<PcgGapObserver> pcg_gaps;
    std::optional<PlcgBasisGapObserver> basis_gaps;
    std::optional<PlcgResidualGapObserver> residual_gaps;
    if (want_true) {
        true_res.emplace(system);
        chain.add(&*true_res);
    }
    if (want_gaps) {
        switch (token.method) {
            case Method::cg:
                cg_gaps.emplace(system);
                chain.add(&*cg_gaps);
                break;
            case Method::pcg:
                pcg_gaps.emplace(system);
                chain.add(&*pcg_gaps);
                break;
            case Method::plcg:
                basis_gaps.emplace(system, config.preconditioner ? &*config.preconditioner
                                                                 : nullptr);
                chain.add(&*basis_gaps);
                residual_gaps.emplace(system, *basis_gaps);
                chain.add(&*residual_gaps);
                break;
        }
    }

    RunResult result;
    switch (token.method) {
        case Method::cg: result.report = cg_solve(system, config, &chain); break;
        case Method::pcg: result.report = pcg_solve(system, config, &chain); break;
        case Method::plcg: result.report = plcg_solve(system, config, &chain); break;
    }
    const SolveReport& report = result.report;
    result.exit_code = outcome_exit_code(report);

    // Propagation norms and spectral bounds at sampled iterations.
    std::map<int, double> ginv_by_record;
    std::map<int, double> ritz_by_record;
    if (want_norms) {
        const int stride =
            rc.norm_sample > 0 ? rc.norm_sample : (system.b.size() <= 10000 ? 1 : 10);
        const PropagationNormTrace norms =
            propagation_norms(report, token.method, stride);
        for (const PropagationNormPoint& p : norms.points)
            if (!p.singular) ginv_by_record[p.j - 1] = p.value;
        if (token.method == Method::plcg) {
            for (const PlcgSegment& seg : report.segments) {
                for (int local_j = 1; local_j <= seg.lanczos.dim(); local_j += stride) {
                    const LemmaBounds bounds =
                        lemma_bounds(seg.lanczos.leading(local_j), config.shifts);
                    ritz_by_record[seg.first_record + local_j - 1] = bounds.ritz_bound;
                }
            }
        }
    }

    GapTrace trace;
    trace.rec_res = report.rec_res_norms;
    if (true_res) trace.true_res = true_res->trace();
    if (cg_gaps) trace.gap_f = cg_gaps->trace();
    if (pcg_gaps) {
        trace.gap_f = pcg_gaps->f();
        trace.gap_g = pcg_gaps->g();
        trace.gap_h = pcg_gaps->h();
        trace.gap_e = pcg_gaps->e();
    }
    if (basis_gaps) trace.gap_f = basis_gaps->trace();
    if (residual_gaps) trace.gap_residual = residual_gaps->trace();

    const std::vector<int> indices = record_indices(report);
    const std::string mode_label = token.method == Method::plcg ? rc.mode : "";
    for (std::size_t k = 0; k < indices.size(); ++k) {
        TraceRow row;
        row.iter = indices[k];
        row.method = token.label;
        if (token.method == Method::plcg) row.l = token.l;
        row.mode = mode_label;
        row.rec_res = trace.rec_res[k];
        row.true_res = opt_at(trace.true_res, k);
        row.gap_f = opt_at(trace.gap_f, k);
        row.gap_resid = opt_at(trace.gap_residual, k);
        if (auto it = ginv_by_record.find(row.iter); it != ginv_by_record.end())
            row.ginv = it->second;
        if (auto it = ritz_by_record.find(row.iter); it != ritz_by_record.end())
            row.ritz = it->second;
        result.rows.push_back(row);
    }
    for (const RestartEvent& e : report.restarts) {
        TraceRow row;
        row.iter = e.iteration;
        row.method = token.label;
        if (token.method == Method::plcg) row.l = token.l;
        row.mode = mode_label;
        row.event = "restart root_arg=" + format_double(e.root_argument);
        result.rows.push_back(row);
    }
    if (report.breakdown) {
        TraceRow row;
        row.iter = report.breakdown->iteration;
        row.method = token.label;
        if (token.method == Method::plcg) row.l = token.l;
        row.mode = mode_label;
        row.event = "breakdown root_arg=" + format_double(report.breakdown->root_argument);
        result.rows.push_back(row);
    }
    std::sort(result.rows.begin(), result.rows.end(),
              [](const TraceRow& a, const TraceRow& b) { return a.iter < b.iter; });
    return result;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_meta(std::ostream& out, const RunConfig& rc, const std::string& command) {
    if (rc.no_header_meta) return;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    out << "# pipecg " << command << " " << buf << "\n";
}

void write_trace(std::ostream& out, const std::vector<TraceRow>& rows) {
    write_csv_row(out, {"iter", "method", "l", "mode", "rec_res", "true_res", "gap_f",
                        "gap_resid", "ginv_maxnorm", "ritz_bound", "event"});
    for (const TraceRow& row : rows) {
        write_csv_row(out,
                      {std::to_string(row.iter), row.method,
                       row.l ? std::to_string(*row.l) : "", row.mode,
                       format_optional(row.rec_res), format_optional(row.true_res),
                       format_optional(row.gap_f), format_optional(row.gap_resid),
                       format_optional(row.ginv), format_optional(row.ritz), row.event});
    }
}

}  // namespace

int cmd_solve(const RunConfig& rc) {
    if (rc.methods.size() != 1)
        throw UsageError("solve takes exactly one method");
    const LinearSystem system = make_system(rc);
    const MethodToken token = parse_method(rc.methods[0], rc.pipeline_depth);
    RunResult result = run_one(token, system, rc);

    Output output(rc.output);
    write_meta(output.stream(), rc, "solve");
    write_trace(output.stream(), result.rows);

    if (result.report.breakdown) {
        std::cerr << "breakdown at iteration " << result.report.breakdown->iteration
                  << " (root argument " << format_double(result.report.breakdown->root_argument)
                  << ")\n";
    }
    return result.exit_code;
}

int cmd_compare(const RunConfig& rc) {
    if (rc.methods.empty()) throw UsageError("compare needs at least one method");
    const LinearSystem system = make_system(rc);

    std::vector<TraceRow> rows;
    int exit_code = 0;
    for (const std::string& token_str : rc.methods) {
        const MethodToken token = parse_method(token_str, rc.pipeline_depth);
        RunResult result = run_one(token, system, rc);
        exit_code = std::max(exit_code, result.exit_code);
        rows.insert(rows.end(), result.rows.begin(), result.rows.end());
    }

    Output output(rc.output);
    write_meta(output.stream(), rc, "compare");
    write_trace(output.stream(), rows);
    return exit_code;
}

void apply_config_file(RunConfig& rc, const std::string& path,
                       const std::vector<std::string>& overridden) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    auto is_overridden = [&overridden](const std::string& key) {
        return std::find(overridden.begin(), overridden.end(), key) != overridden.end();
    };
    auto parse_int_list = [](const std::string& value) {
        std::vector<int> out;
        for (const std::string& item : split(value, ','))
            out.push_back(static_cast<int>(parse_number(item)));
        return out;
    };
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (is_overridden(key)) continue;
        if (key == "problem") rc.problem = value;
        else if (key == "method" || key == "methods") rc.methods = split(value, ',');
        else if (key == "l") rc.pipeline_depth = static_cast<int>(parse_number(value));
        else if (key == "shifts") rc.shifts = value;
        else if (key == "tol") rc.tolerance = parse_number(value);
        else if (key == "maxit") rc.max_iters = static_cast<int>(parse_number(value));
        else if (key == "mode") rc.mode = value;
        else if (key == "on-breakdown") rc.on_breakdown = value;
        else if (key == "precond") rc.preconditioner = value;
        else if (key == "rhs") rc.rhs = value;
        else if (key == "diag") rc.diagnostics = value;
        else if (key == "norm-sample") rc.norm_sample = static_cast<int>(parse_number(value));
        else if (key == "output") rc.output = value;
        else if (key == "no-header-meta") rc.no_header_meta = (value == "true" || value == "1");
        else if (key == "l-values") rc.l_values = parse_int_list(value);
        else if (key == "j-values") rc.j_values = parse_int_list(value);
        else throw UsageError("config line " + std::to_string(lineno) + ": unknown key " + key);
    }
}

int cmd_table1(const RunConfig& rc) {
    const LinearSystem system = make_system(rc);
    const bool monomial = rc.shifts == "monomial";
    const BoundsTable table = table1_grid(
        system, rc.l_values, rc.j_values,
        [&rc](int l) { return make_shift_schedule(rc.shifts, l); });

    Output output(rc.output);
    write_meta(output.stream(), rc, "table1");
    std::vector<std::string> header = {"l", "j", "ginv_maxnorm", "ginv_2norm_bound",
                                       "ritz_bound"};
    if (monomial) header.push_back("monomial_bound");
    write_csv_row(output.stream(), header);
    for (const BoundsCell& cell : table.cells) {
        std::vector<std::string> fields = {std::to_string(cell.l), std::to_string(cell.j),
                                           format_optional(cell.measured),
                                           format_optional(cell.two_norm_bound),
                                           format_double(cell.ritz_bound)};
        if (monomial) fields.push_back(format_optional(cell.monomial_bound));
        write_csv_row(output.stream(), fields);
    }
    return 0;
}

}  // namespace pipecg
