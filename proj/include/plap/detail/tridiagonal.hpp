#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace plap::detail {

/// Symmetric tridiagonal system with diagonal `diag` and off-diagonal `off`
/// (off[i] couples unknowns i and i+1). Solved by Thomas elimination.
/// Returns false when a pivot is not strictly positive, i.e. the matrix is
/// not positive definite and the result must not be used.
inline bool solve_spd_tridiagonal(std::span<const double> diag, std::span<const double> off,
                                  std::span<const double> rhs, std::span<double> x) {
    const std::size_t n = diag.size();
    if (n == 0) return true;
    std::vector<double> c(n), d(n);
    double pivot = diag[0];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
    c[0] = n > 1 ? off[0] / pivot : 0.0;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - off[i - 1] * c[i - 1];
        if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
        c[i] = i + 1 < n ? off[i] / pivot : 0.0;
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return true;
}

} // namespace plap::detail
