#pragma once

#include <stdexcept>
#include <string>

namespace pipecg {

struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown by triangular inversion when a diagonal entry is (numerically) zero.
struct SingularMatrixError : std::runtime_error {
    SingularMatrixError(const std::string& what, int diagonal_index)
        : std::runtime_error(what), index(diagonal_index) {}
    int index;
};

/// Matrix Market ingestion failure; `line` is 1-based and 0 when unknown.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long line_number)
        : std::runtime_error(what), line(line_number) {}
    long line;
};

struct SolverError : std::runtime_error {
    SolverError(const std::string& what, int at_iteration)
        : std::runtime_error(what), iteration(at_iteration) {}
    int iteration;
};

/// (s_i, p_i) <= 0 in CG: the operator is not positive definite.
struct IndefiniteOperatorError : SolverError {
    using SolverError::SolverError;
};

/// Unrecoverable scalar breakdown (zero division in a coefficient update).
struct BreakdownError : SolverError {
    using SolverError::SolverError;
};

}  // namespace pipecg
