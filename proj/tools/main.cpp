#include <iostream>

#include <CLI11.hpp>

#include "pipecg/cli.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
};

void add_common_options(CLI::App* cmd, pipecg::RunConfig& rc, CommonOptions* extra) {
    cmd->add_option("--problem", rc.problem, "poisson:<nx>x<ny> or mm:<path>");
    cmd->add_option("-l,--l", rc.pipeline_depth, "pipeline depth for plcg");
    cmd->add_option("--shifts", rc.shifts,
                    "chebyshev:<min>,<max> | monomial | explicit:<v,...>");
    cmd->add_option("--tol", rc.tolerance, "relative recursive-residual tolerance");
    cmd->add_option("--maxit", rc.max_iters, "maximum solution updates");
    cmd->add_option("--mode", rc.mode, "standard | stabilized");
    cmd->add_option("--on-breakdown", rc.on_breakdown, "restart | fail");
    cmd->add_option("--precond", rc.preconditioner, "none | jacobi");
    cmd->add_option("--rhs", rc.rhs, "inv_sqrt_n | ones");
    cmd->add_option("--diag", rc.diagnostics, "none | true_res | gaps | norms | all");
    cmd->add_option("--norm-sample", rc.norm_sample,
                    "stride for propagation-norm sampling (0 = auto)");
    cmd->add_option("-o,--output", rc.output, "CSV output path (default stdout)");
    cmd->add_flag("--no-header-meta", rc.no_header_meta,
                  "suppress the timestamp header line");
    cmd->add_option("--config", extra->config_path,
                    "key=value config file (flags override its entries)");
}

// Flags given on the command line take precedence over config file entries.
void merge_config(CLI::App* cmd, const CommonOptions& extra, pipecg::RunConfig& rc,
                  const std::vector<std::string>& keys) {
    if (extra.config_path.empty()) return;
    std::vector<std::string> overridden;
    for (const std::string& key : keys) {
        if (cmd->count("--" + key) > 0) overridden.push_back(key);
    }
    pipecg::apply_config_file(rc, extra.config_path, overridden);
}

const std::vector<std::string> kCommonKeys = {
    "problem", "l",       "shifts",      "tol",        "maxit",
    "mode",    "on-breakdown", "precond", "rhs",        "diag",
    "norm-sample", "output", "no-header-meta"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pipelined Conjugate Gradient solvers with rounding-error diagnostics"};
    app.require_subcommand(1);

    pipecg::RunConfig solve_rc, compare_rc, table_rc;
    CommonOptions solve_extra, compare_extra, table_extra;

    CLI::App* solve = app.add_subcommand("solve", "run one solver and write a CSV trace");
    add_common_options(solve, solve_rc, &solve_extra);
    solve->add_option("--method", solve_rc.methods, "cg | pcg | plcg")
        ->expected(1);

    CLI::App* compare = app.add_subcommand(
        "compare", "run several methods on one problem into a combined CSV");
    add_common_options(compare, compare_rc, &compare_extra);
    compare->add_option("--methods", compare_rc.methods,
                        "comma list of cg | pcg | plcg:<l>")
        ->delimiter(',');

    CLI::App* table = app.add_subcommand(
        "table1", "grid of propagation-matrix norms and spectral bounds");
    add_common_options(table, table_rc, &table_extra);
    table->add_option("--l-values", table_rc.l_values, "pipeline depths")->delimiter(',');
    table->add_option("--j-values", table_rc.j_values, "sampled iterations")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            std::vector<std::string> keys = kCommonKeys;
            keys.push_back("method");
            merge_config(solve, solve_extra, solve_rc, keys);
            return pipecg::cmd_solve(solve_rc);
        }
        if (compare->parsed()) {
            std::vector<std::string> keys = kCommonKeys;
            keys.push_back("methods");
            merge_config(compare, compare_extra, compare_rc, keys);
            return pipecg::cmd_compare(compare_rc);
        }
        if (table->parsed()) {
            std::vector<std::string> keys = kCommonKeys;
            keys.push_back("l-values");
            keys.push_back("j-values");
            merge_config(table, table_extra, table_rc, keys);
            return pipecg::cmd_table1(table_rc);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
