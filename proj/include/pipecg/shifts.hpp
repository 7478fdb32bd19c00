#pragma once

#include <vector>

#include "pipecg/tridiag.hpp"

namespace pipecg {

enum class BasisKind { chebyshev, monomial, user };

/// Shift schedule sigma_0..sigma_{l-1} defining the auxiliary Krylov basis
/// polynomial P_l(t) = prod (t - sigma_i).
struct ShiftSchedule {
    std::vector<double> shifts;
    BasisKind basis_kind = BasisKind::user;

    int depth() const { return static_cast<int>(shifts.size()); }
    bool all_zero() const {
        for (double s : shifts)
            if (s != 0.0) return false;
        return true;
    }
};

/// Roots of the degree-l Chebyshev polynomial mapped onto [lambda_min,
/// lambda_max]:
///   sigma_i = (max+min)/2 + (max-min)/2 * cos((2i+1)pi/(2l)).
/// Evaluated for the lower half and mirrored, so sigma_i + sigma_{l-1-i} is
/// exactly min+max and an odd-l midpoint is exactly the interval center.
ShiftSchedule chebyshev_shifts(int l, double lambda_min, double lambda_max);

/// l zero shifts (classic monomial Newton basis).
ShiftSchedule monomial_shifts(int l);

inline DenseMatrix shifted_poly_apply(const SymTridiag& h, const ShiftSchedule& schedule) {
    return shifted_poly_apply(h, std::span<const double>(schedule.shifts));
}

}  // namespace pipecg
