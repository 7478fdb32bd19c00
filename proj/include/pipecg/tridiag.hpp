#pragma once

#include <span>
#include <vector>

#include "pipecg/dense_matrix.hpp"
#include "pipecg/errors.hpp"

namespace pipecg {

/// Symmetric tridiagonal matrix given by its diagonal gamma_0..gamma_{j-1}
/// and off-diagonal delta_0..; with |delta| == |gamma| the trailing delta
/// belongs to the rectangular (j+1) x j extension.
class SymTridiag {
public:
    SymTridiag() = default;
    SymTridiag(std::vector<double> gamma, std::vector<double> delta);

    int dim() const { return static_cast<int>(gamma_.size()); }
    bool square() const { return delta_.size() + 1 == gamma_.size(); }

    const std::vector<double>& gamma() const { return gamma_; }
    const std::vector<double>& delta() const { return delta_; }
    double gamma(int i) const { return gamma_[i]; }
    double delta(int i) const { return delta_[i]; }

    void push(double gamma_value, double delta_value) {
        gamma_.push_back(gamma_value);
        delta_.push_back(delta_value);
    }

    void clear() {
        gamma_.clear();
        delta_.clear();
    }

    /// Square leading j x j block.
    SymTridiag leading(int j) const;

    /// Dense square form.
    DenseMatrix to_dense() const;

private:
    std::vector<double> gamma_;
    std::vector<double> delta_;
};

/// All eigenvalues of a square symmetric tridiagonal matrix, ascending,
/// computed by bisection on Sturm sequence sign counts; relative accuracy
/// 1e-12 or better.
std::vector<double> sym_tridiag_eigenvalues(const SymTridiag& h);

/// P(H) = prod_i (H - sigma_i I) as a dense symmetric matrix with bandwidth
/// 2*len(shifts)+1. An empty shift list yields the identity.
DenseMatrix shifted_poly_apply(const SymTridiag& h, std::span<const double> shifts);

/// Scalar P(t) = prod_i (t - sigma_i).
double shifted_poly_eval(double t, std::span<const double> shifts);

}  // namespace pipecg
