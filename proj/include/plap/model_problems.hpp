#pragma once

/// Auxiliary problems with a sublinear term:
///
///   concave         −Δ_p w = Λ w^{q−1}
///   linear-concave  −Δ_p u = λ u^{p−1} + κ u^{q−1},   0 ≤ λ < λ₁(p)
///
/// Both are solved by minimizing their coercive energies written with the
/// positive part u⁺, so minimizers are nonnegative. Solutions obey the exact
/// scaling u_κ = κ^{1/(p−q)} u_1; when the requested coefficient would put the
/// solution far from unit size, the solve runs at a rescaled coefficient and
/// the result is mapped back through that law.

#include "plap/core.hpp"
#include "plap/eigen.hpp"
#include "plap/error.hpp"
#include "plap/grid.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace plap {

/// Exponents with 1 < q < p < r.
struct Params {
    double p = 2.0;
    double q = 1.5;
    double r = 3.0;

    /// Smallest accepted gap p − q.
    static constexpr double kMinGap = 1e-6;

    void validate() const {
        require_solver_exponent(p);
        std::ostringstream os;
        if (!(q > 1.0 && q < p && p < r) || !std::isfinite(r)) {
            os << "exponents must satisfy 1 < q < p < r (got p = " << p << ", q = " << q << ", r = " << r << ")";
            throw Error(ErrorCode::invalid_parameter, os.str());
        }
        if (p - q < kMinGap) {
            os << "p - q must be >= " << kMinGap << " (got " << p - q << ")";
            throw Error(ErrorCode::invalid_parameter, os.str());
        }
    }
};

inline Params make_params(double p, double q, double r) {
    Params prm{p, q, r};
    prm.validate();
    return prm;
}

struct ConcaveSolution {
    GridFunction u;
    double Lambda = 0.0;
    double sup_norm = 0.0;
    SolveReport report;
};

struct LinearConcaveSolution {
    GridFunction u;
    double lambda = 0.0;
    double coeff = 1.0;
    double sup_norm = 0.0;
    /// ∥u_{q,λ}∥_∞ (λ₁ − λ)^{1/(p−q)} for the coefficient-one solution. For
    /// other coefficients it is recovered through the scaling law.
    double c_value = 0.0;
    SolveReport report;
};

namespace detail {

/// F(u) = (λ/p)(u⁺)^p + (κ/q)(u⁺)^q
struct SublinearTerm {
    double p, q, lambda, kappa;
    double primitive(std::size_t, double u) const noexcept {
        if (u <= 0.0) return 0.0;
        return lambda / p * std::pow(u, p) + kappa / q * std::pow(u, q);
    }
    double value(std::size_t, double u) const noexcept {
        if (u <= 0.0) return 0.0;
        return lambda * std::pow(u, p - 1.0) + kappa * std::pow(u, q - 1.0);
    }
    double derivative(std::size_t, double u) const noexcept {
        if (u <= 0.0) return 0.0;
        return lambda * (p - 1.0) * std::pow(u, p - 2.0) + kappa * (q - 1.0) * std::pow(u, q - 2.0);
    }
};

/// Solution sizes outside this window are reached through the scaling law.
inline constexpr double kDirectSolveMin = 1e-1;
inline constexpr double kDirectSolveMax = 1e1;

struct SublinearSolve {
    GridFunction u;
    SolveReport report;
};

/// Minimizes (1/p)∫|u'|^p − (λ/p)∫(u⁺)^p − (κ/q)∫(u⁺)^q.
/// `rate` is the denominator of the predicted size (κ / rate)^{1/(p−q)};
/// `shape` is a positive profile with unit sup norm used as initial guess.
inline SublinearSolve solve_sublinear(const Grid& grid, double p, double q, double lambda, double kappa, double rate,
                                      const GridFunction& shape, const GridFunction* initial,
                                      const SolverConfig& cfg) {
    const double inv_gap = 1.0 / (p - q);
    const double predicted = std::pow(kappa / rate, inv_gap);
    double kappa_eff = kappa;
    if (initial == nullptr && !(predicted >= kDirectSolveMin && predicted <= kDirectSolveMax)) kappa_eff = rate;
    const double back_scale = kappa_eff == kappa ? 1.0 : std::pow(kappa / kappa_eff, inv_gap);

    GridFunction u = initial != nullptr ? *initial : std::pow(kappa_eff / rate, inv_gap) * shape;
    const SublinearTerm term{p, q, lambda, kappa_eff};
    const SolverConfig inner = cfg;
    auto picard = [&](std::span<const double> cur, std::vector<double>& dir) {
        GridFunction rhs(grid);
        for (std::size_t i = 1; i + 1 < cur.size(); ++i) rhs.set(i, term.value(i, cur[i]));
        auto sol = solve_p_poisson(rhs, p, inner);
        if (sol.report.status != SolveStatus::converged) return false;
        for (std::size_t i = 1; i + 1 < cur.size(); ++i) dir[i - 1] = sol.u[i] - cur[i];
        return true;
    };
    SolveReport report = minimize_energy(u, p, term, cfg, picard);
    if (back_scale != 1.0) {
        u *= back_scale;
        report.sup_norm = sup_norm(u);
    }
    return {std::move(u), std::move(report)};
}

inline GridFunction unit_sup(GridFunction f) {
    f *= 1.0 / sup_norm(f);
    return f;
}

inline void require_converged_positive(const GridFunction& u, const SolveReport& rep, const char* what) {
    if (rep.status != SolveStatus::converged) {
        throw Error(ErrorCode::solver_failure, std::string(what) + " solve ended with status " + to_string(rep.status));
    }
    if (!(u.interior_min() > 0.0)) {
        throw Error(ErrorCode::solver_failure, std::string(what) + " minimizer is not positive at every interior node");
    }
}

} // namespace detail

/// Positive solution of −Δ_p w = Λ w^{q−1}; zero for Λ = 0.
inline ConcaveSolution solve_concave(double Lambda, const Params& params, const Grid& grid,
                                     const SolverConfig& cfg = {}, const GridFunction* initial = nullptr) {
    params.validate();
    if (!(Lambda >= 0.0) || !std::isfinite(Lambda)) {
        throw Error(ErrorCode::invalid_parameter, "Lambda must be >= 0");
    }
    if (Lambda == 0.0) {
        ConcaveSolution zero{GridFunction(grid), 0.0, 0.0, {}};
        zero.report.status = SolveStatus::converged;
        return zero;
    }
    // The bubble's Rayleigh quotient stands in for λ₁ when sizing the guess.
    const GridFunction bubble = positive_bubble(grid, params.p);
    const double rate = rayleigh_quotient(bubble, params.p);
    auto [u, rep] = detail::solve_sublinear(grid, params.p, params.q, 0.0, Lambda, rate, detail::unit_sup(bubble),
                                            initial, cfg);
    detail::require_converged_positive(u, rep, "concave");
    const double s = sup_norm(u);
    return {std::move(u), Lambda, s, std::move(rep)};
}

/// Largest λ accepted relative to λ₁.
inline constexpr double kLambdaCapFraction = 1.0 - 1e-3;

/// Positive solution of −Δ_p u = λ u^{p−1} + coeff·u^{q−1}.
inline LinearConcaveSolution solve_linear_concave(double lambda, double coeff, const Params& params, const Grid& grid,
                                                  const EigenResult& eig, const SolverConfig& cfg = {},
                                                  const GridFunction* initial = nullptr) {
    params.validate();
    require_same_grid(eig.eigenfunction, GridFunction(grid));
    std::ostringstream os;
    if (!(lambda >= 0.0)) {
        os << "lambda must be >= 0 (got " << lambda << ")";
        throw Error(ErrorCode::invalid_parameter, os.str());
    }
    if (lambda >= eig.lambda1) {
        os << "lambda = " << lambda << " >= lambda1 = " << eig.lambda1 << ": no positive solution exists";
        throw Error(ErrorCode::lambda_too_large, os.str());
    }
    if (lambda > kLambdaCapFraction * eig.lambda1) {
        os << "lambda = " << lambda << " exceeds the cap (1 - 1e-3)*lambda1 = " << kLambdaCapFraction * eig.lambda1;
        throw Error(ErrorCode::lambda_too_large, os.str());
    }
    if (!(coeff > 0.0) || !std::isfinite(coeff)) {
        throw Error(ErrorCode::invalid_parameter, "coefficient on the concave term must be > 0");
    }
    const double gap = eig.lambda1 - lambda;
    // m·φ₁ with m^{p−q} = coeff/(λ₁ − λ) and sup φ₁ = 1 is a subsolution.
    auto [u, rep] = detail::solve_sublinear(grid, params.p, params.q, lambda, coeff, gap,
                                            detail::unit_sup(eig.eigenfunction), initial, cfg);
    detail::require_converged_positive(u, rep, "linear-concave");
    const double s = sup_norm(u);
    const double inv_gap = 1.0 / (params.p - params.q);
    const double c = s * std::pow(gap / coeff, inv_gap);
    return {std::move(u), lambda, coeff, s, c, std::move(rep)};
}

/// c(q, λ) = ∥u_{q,λ}∥_∞ (λ₁ − λ)^{1/(p−q)}
inline double c_constant(const Params& params, double lambda, const Grid& grid, const EigenResult& eig,
                         const SolverConfig& cfg = {}) {
    return solve_linear_concave(lambda, 1.0, params, grid, eig, cfg).c_value;
}

struct SandwichReport {
    double p = 0.0;
    double q = 0.0;
    double lambda = 0.0;
    double lower = 0.0;
    double supnorm = 0.0;
    /// NaN when ∥u_{q,0}∥_∞^{q−p} ≤ λ.
    double upper = std::numeric_limits<double>::quiet_NaN();
    bool upper_defined = false;
    double c_value = 0.0;
    bool holds = false;
};

inline constexpr double kSandwichSlack = 5e-2;

/// Checks (λ₁−λ)^{−1/(p−q)} ≤ ∥u_{q,λ}∥_∞ ≤ (∥u_{q,0}∥_∞^{q−p} − λ)^{−1/(p−q)}
/// with relative slack. When the upper bound is undefined it is reported as
/// such and only the lower inequality decides `holds`.
inline SandwichReport verify_supnorm_sandwich(double lambda, const Params& params, const Grid& grid,
                                              const EigenResult& eig, const SolverConfig& cfg = {},
                                              double slack = kSandwichSlack) {
    const auto u0 = solve_linear_concave(0.0, 1.0, params, grid, eig, cfg);
    const auto ul = lambda == 0.0 ? u0 : solve_linear_concave(lambda, 1.0, params, grid, eig, cfg);
    const double inv_gap = 1.0 / (params.p - params.q);

    SandwichReport rep;
    rep.p = params.p;
    rep.q = params.q;
    rep.lambda = lambda;
    rep.supnorm = ul.sup_norm;
    rep.c_value = ul.c_value;
    rep.lower = std::pow(eig.lambda1 - lambda, -inv_gap);
    const double base = std::pow(u0.sup_norm, params.q - params.p) - lambda;
    rep.upper_defined = base > 0.0;
    if (rep.upper_defined) rep.upper = std::pow(base, -inv_gap);
    const bool lower_ok = rep.lower <= rep.supnorm * (1.0 + slack);
    const bool upper_ok = !rep.upper_defined || rep.supnorm <= rep.upper * (1.0 + slack);
    rep.holds = lower_ok && upper_ok;
    return rep;
}

inline void write_sandwich_header(std::ostream& os) { os << "p,q,lambda,sup_norm,c_value,lower,upper,holds\n"; }

inline void write_sandwich_row(std::ostream& os, const SandwichReport& r) {
    const auto old = os.precision(12);
    os << r.p << ',' << r.q << ',' << r.lambda << ',' << r.supnorm << ',' << r.c_value << ',' << r.lower << ',';
    if (r.upper_defined) os << r.upper;
    os << ',' << (r.holds ? "true" : "false") << '\n';
    os.precision(old);
}

} // namespace plap
