#pragma once

#include <string>
#include <vector>

namespace pipecg {

/// Aggregated command-line run description. String fields keep the CLI
/// grammar (`poisson:200x200`, `chebyshev:0,8`, ...) so a key=value config
/// file and flags share one parser.
struct RunConfig {
    std::string problem = "poisson:200x200";
    std::vector<std::string> methods = {"cg"};  // cg | pcg | plcg | plcg:<l>
    int pipeline_depth = 1;
    std::string shifts = "chebyshev:0,8";  // chebyshev:<lo>,<hi> | monomial | explicit:<v,..>
    double tolerance = 1e-6;
    int max_iters = 100;
    std::string mode = "standard";         // standard | stabilized
    std::string on_breakdown = "restart";  // restart | fail
    std::string preconditioner = "none";   // none | jacobi
    std::string rhs = "inv_sqrt_n";        // inv_sqrt_n | ones
    std::string diagnostics = "true_res";  // none | true_res | gaps | norms | all
    int norm_sample = 0;                   // propagation-norm stride; 0 = auto
    std::string output;                    // CSV path; empty writes to stdout
    bool no_header_meta = false;

    std::vector<int> l_values = {1, 2, 3, 4, 5, 10};        // table1
    std::vector<int> j_values = {10, 50, 100, 200, 400};    // table1
};

/// Exit codes: 0 converged, 1 usage/IO error (thrown as std::exception),
/// 2 max-iterations, 3 breakdown under the fail policy.
int cmd_solve(const RunConfig& config);
int cmd_compare(const RunConfig& config);
int cmd_table1(const RunConfig& config);

/// Applies a line-oriented key=value config file. Keys use the long option
/// names (maxit=500, shifts=chebyshev:0,8, ...). Keys listed in
/// `overridden` were given as flags and win over the file.
void apply_config_file(RunConfig& config, const std::string& path,
                       const std::vector<std::string>& overridden);

}  // namespace pipecg
