#include "pipecg/shifts.hpp"

#include <cmath>
#include <numbers>

#include "pipecg/errors.hpp"

namespace pipecg {

ShiftSchedule chebyshev_shifts(int l, double lambda_min, double lambda_max) {
    if (l < 1) throw DimensionMismatchError("pipeline depth must be >= 1");
    if (!(lambda_min < lambda_max))
        throw DimensionMismatchError("empty spectral interval");

    const double mid = 0.5 * (lambda_max + lambda_min);
    const double rad = 0.5 * (lambda_max - lambda_min);
    ShiftSchedule s;
    s.basis_kind = BasisKind::chebyshev;
    s.shifts.resize(l);
    for (int i = 0; i < l / 2; ++i) {
        const double c = std::cos((2 * i + 1) * std::numbers::pi / (2.0 * l));
        s.shifts[i] = mid + rad * c;
        s.shifts[l - 1 - i] = (lambda_min + lambda_max) - s.shifts[i];
    }
    if (l % 2 == 1) s.shifts[l / 2] = mid;
    return s;
}

ShiftSchedule monomial_shifts(int l) {
    if (l < 1) throw DimensionMismatchError("pipeline depth must be >= 1");
    ShiftSchedule s;
    s.basis_kind = BasisKind::monomial;
    s.shifts.assign(l, 0.0);
    return s;
}

}  // namespace pipecg
