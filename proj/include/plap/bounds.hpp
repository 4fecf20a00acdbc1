#pragma once

/// Closed-form bounds for the existence threshold Λ_{q,r} of
/// −Δ_p u = Λ u^{q−1} + u^{r−1}.
///
/// Upper bound Λ̂: for Λ > Λ̂ the balance function Φ_Λ(t) = Λ t^{q−p} + t^{r−p}
/// stays above λ₁ for every t > 0, so a positive solution would be a strict
/// supersolution of the eigenvalue problem, which cannot exist.
///
/// Lower bound Λ̃ = Λ̂ · c(q, t_q λ₁)^{q−p} with t_q = (p−q)/(r−q): below it a
/// scaled linear-concave solution is an explicit supersolution.

#include "plap/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace plap {

namespace detail {

inline void require_ordered_exponents(double p, double q, double r) {
    if (!(q > 1.0 && q < p && p < r)) {
        std::ostringstream os;
        os << "exponents must satisfy 1 < q < p < r (got p = " << p << ", q = " << q << ", r = " << r << ")";
        throw Error(ErrorCode::invalid_parameter, os.str());
    }
}

} // namespace detail

/// Λ̂ = λ₁^{(r−q)/(r−p)} (r−p) ((p−q)^{p−q} / (r−q)^{r−q})^{1/(r−p)}
inline double lambda_hat(double p, double q, double r, double lambda1) {
    detail::require_ordered_exponents(p, q, r);
    if (r - p < 1e-6) throw Error(ErrorCode::exponent_degeneracy, "r - p must be >= 1e-6");
    if (!(lambda1 > 0.0)) throw Error(ErrorCode::invalid_parameter, "lambda1 must be > 0");
    // Evaluated in logs so that large exponents 1/(r−p) do not overflow.
    const double log_val = (r - q) / (r - p) * std::log(lambda1) + std::log(r - p) +
                           ((p - q) * std::log(p - q) - (r - q) * std::log(r - q)) / (r - p);
    return std::exp(log_val);
}

/// Φ_Λ(t) = Λ t^{q−p} + t^{r−p}
inline double phi(double t, double Lambda, double p, double q, double r) {
    if (!(t > 0.0)) throw Error(ErrorCode::nonpositive_t, "t must be > 0");
    if (!(Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0");
    return Lambda * std::pow(t, q - p) + std::pow(t, r - p);
}

struct PhiMinimum {
    double t_min = 0.0;
    double phi_min = 0.0;
};

/// t_Λ = (Λ(p−q)/(r−p))^{1/(r−q)} and
/// Φ_Λ(t_Λ) = Λ^{(r−p)/(r−q)} (r−q) / ((p−q)^{(p−q)/(r−q)} (r−p)^{(r−p)/(r−q)}).
inline PhiMinimum phi_argmin(double Lambda, double p, double q, double r) {
    detail::require_ordered_exponents(p, q, r);
    if (!(Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0");
    PhiMinimum m;
    m.t_min = std::pow(Lambda * (p - q) / (r - p), 1.0 / (r - q));
    m.phi_min = std::pow(Lambda, (r - p) / (r - q)) * (r - q) /
                (std::pow(p - q, (p - q) / (r - q)) * std::pow(r - p, (r - p) / (r - q)));
    return m;
}

/// true iff min_t Φ_Λ(t) > λ₁, i.e. no positive solution exists at Λ. The
/// comparison allows a few ulps so that Λ = Λ̂ itself is not certified.
inline bool nonexistence_certificate(double Lambda, double p, double q, double r, double lambda1) {
    const double m = phi_argmin(Lambda, p, q, r).phi_min;
    return m > lambda1 * (1.0 + 64.0 * std::numeric_limits<double>::epsilon());
}

/// t_q = (p−q)/(r−q), the maximizer of t^{(p−q)/(r−p)}(1−t) on (0, 1).
inline double t_q(double p, double q, double r) {
    detail::require_ordered_exponents(p, q, r);
    return (p - q) / (r - q);
}

/// Tolerance on c ≥ 1.
inline constexpr double kCTolerance = 1e-3;

/// Λ̃ = Λ̂ · c^{q−p}
inline double lambda_tilde(double p, double q, double r, double lambda1, double c_at_tq) {
    if (!(c_at_tq >= 1.0 - kCTolerance)) {
        std::ostringstream os;
        os << "c(q, t_q lambda1) must be >= 1 (got " << c_at_tq << ")";
        throw Error(ErrorCode::invalid_c, os.str());
    }
    return lambda_hat(p, q, r, lambda1) * std::pow(c_at_tq, q - p);
}

} // namespace plap
