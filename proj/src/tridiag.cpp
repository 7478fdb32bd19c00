#include "pipecg/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pipecg {

SymTridiag::SymTridiag(std::vector<double> gamma, std::vector<double> delta)
    : gamma_(std::move(gamma)), delta_(std::move(delta)) {
    if (!gamma_.empty() && delta_.size() + 1 != gamma_.size() &&
        delta_.size() != gamma_.size())
        throw DimensionMismatchError("tridiagonal band lengths inconsistent");
    for (double v : gamma_)
        if (!std::isfinite(v)) throw DimensionMismatchError("non-finite diagonal entry");
    for (double v : delta_)
        if (!std::isfinite(v)) throw DimensionMismatchError("non-finite off-diagonal entry");
}

SymTridiag SymTridiag::leading(int j) const {
    return SymTridiag(std::vector<double>(gamma_.begin(), gamma_.begin() + j),
                      std::vector<double>(delta_.begin(), delta_.begin() + std::max(0, j - 1)));
}

DenseMatrix SymTridiag::to_dense() const {
    const int n = dim();
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = gamma_[i];
        if (i + 1 < n) {
            m.at(i, i + 1) = delta_[i];
            m.at(i + 1, i) = delta_[i];
        }
    }
    return m;
}

namespace {

// Number of eigenvalues strictly below x (Sturm sign count on the LDL^T
// pivots, with the LAPACK-style pivot floor).
int sturm_count(const std::vector<double>& g, const std::vector<double>& e2,
                double pivmin, double x) {
    int count = 0;
    double d = 1.0;
    const int n = static_cast<int>(g.size());
    for (int i = 0; i < n; ++i) {
        d = g[i] - x - (i > 0 ? e2[i - 1] / d : 0.0);
        if (d < 0.0) ++count;
        if (std::fabs(d) < pivmin) d = -pivmin;
    }
    return count;
}

}  // namespace

std::vector<double> sym_tridiag_eigenvalues(const SymTridiag& h) {
    if (!h.square() && h.dim() != 1)
        throw DimensionMismatchError("eigenvalues need a square tridiagonal");
    const int n = h.dim();
    if (n == 0) return {};
    if (n == 1) return {h.gamma(0)};

    const std::vector<double>& g = h.gamma();
    std::vector<double> e2(n - 1);
    double emax2 = 1.0;
    for (int i = 0; i < n - 1; ++i) {
        e2[i] = h.delta(i) * h.delta(i);
        emax2 = std::max(emax2, e2[i]);
    }
    const double pivmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() * emax2;

    // Gershgorin bounds.
    double lo = g[0], hi = g[0];
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(h.delta(i - 1)) : 0.0) +
                         (i < n - 1 ? std::fabs(h.delta(i)) : 0.0);
        lo = std::min(lo, g[i] - r);
        hi = std::max(hi, g[i] + r);
    }
    const double span = hi - lo;
    lo -= 1e-12 * (std::fabs(lo) + span) + pivmin;
    hi += 1e-12 * (std::fabs(hi) + span) + pivmin;

    std::vector<double> eig(n);
    for (int k = 0; k < n; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            if (sturm_count(g, e2, pivmin, mid) >= k + 1)
                b = mid;
            else
                a = mid;
            if (b - a <= 1e-14 * std::max(std::fabs(a), std::fabs(b))) break;
        }
        eig[k] = 0.5 * (a + b);
    }
    return eig;
}

DenseMatrix shifted_poly_apply(const SymTridiag& h, std::span<const double> shifts) {
    if (!h.square() && h.dim() != 1)
        throw DimensionMismatchError("matrix polynomial needs a square tridiagonal");
    const int n = h.dim();
    DenseMatrix p = DenseMatrix::identity(n);
    for (double sigma : shifts) {
        DenseMatrix factor = h.to_dense();
        for (int i = 0; i < n; ++i) factor.at(i, i) -= sigma;
        p = factor.multiply(p);
    }
    return p;
}

double shifted_poly_eval(double t, std::span<const double> shifts) {
    double p = 1.0;
    for (double sigma : shifts) p *= (t - sigma);
    return p;
}

}  // namespace pipecg
