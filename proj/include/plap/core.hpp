#pragma once

/// Discrete p-Dirichlet energy, its gradient (the weak residual tested
/// against interior hat functions) and a damped Newton minimizer.
///
/// On cell c with slope s_c the energy density is |s_c|^p / p. With lumped
/// zero-order terms the gradient at interior node i is
///
///     R_i = φ(s_{i-1}) - φ(s_i) - h f_i(u_i),    φ(s) = |s|^{p-2} s,
///
/// where cell i-1 lies left of node i. The Hessian is tridiagonal.

#include "plap/detail/tridiagonal.hpp"
#include "plap/error.hpp"
#include "plap/grid.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace plap {

struct SolverConfig {
    /// Weak-residual threshold. Solvers scale it by (1 + sup of the nodal
    /// right-hand side) before comparing.
    double tol_residual = 1e-10;
    /// Sup-norm threshold on successive iterates.
    double tol_step = 1e-10;
    int max_inner_iters = 200;
    /// Curvature regularization used inside the Hessian only.
    double epsilon_reg = 1e-8;
    /// Sup-norm above which an iterate counts as diverged.
    double blowup_cap = 1e6;

    void validate() const {
        auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_config, what); };
        if (!(tol_residual > 0.0)) bad("tol_residual must be > 0");
        if (!(tol_step > 0.0)) bad("tol_step must be > 0");
        if (!(epsilon_reg > 0.0)) bad("epsilon_reg must be > 0");
        if (max_inner_iters < 1) bad("max_inner_iters must be >= 1");
        if (!(blowup_cap > 1.0)) bad("blowup_cap must be > 1");
    }
};

enum class SolveStatus { converged, max_iters, diverged };

constexpr const char* to_string(SolveStatus s) noexcept {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    double final_energy = 0.0;
    double sup_norm = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    /// Energy at every accepted iterate, starting with the initial guess.
    /// Diagnostic only; not serialized.
    std::vector<double> energy_history;
};

inline nlohmann::ordered_json to_json(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["iterations"] = r.iterations;
    j["final_residual"] = r.final_residual;
    j["final_energy"] = r.final_energy;
    j["sup_norm"] = r.sup_norm;
    j["status"] = to_string(r.status);
    return j;
}

/// Exponents accepted by the solvers.
inline constexpr double kMinSolverExponent = 1.1;
inline constexpr double kMaxSolverExponent = 10.0;

inline void require_solver_exponent(double p) {
    if (!(p >= kMinSolverExponent && p <= kMaxSolverExponent)) {
        std::ostringstream os;
        os << "p must lie in [" << kMinSolverExponent << ", " << kMaxSolverExponent << "] (got " << p << ")";
        throw Error(ErrorCode::invalid_parameter, os.str());
    }
}

/// |s|^{p-2} s
inline double flux(double s, double p) noexcept { return std::copysign(std::pow(std::abs(s), p - 1.0), s); }

/// (1/p) Σ_cells h |slope(u)|^p − quadrature(rhs·u)
inline double energy(const GridFunction& u, double p, const GridFunction& rhs) {
    require_exponent(p);
    require_same_grid(u, rhs);
    const double h = u.grid().h();
    double dirichlet = 0.0;
    for (std::size_t c = 0; c + 1 < u.size(); ++c) dirichlet += std::pow(std::abs(cell_slope(u, c)), p);
    return h * dirichlet / p - integrate_product(rhs, u);
}

/// Nodal weak residual of −Δ_p u = rhs against interior hat functions.
/// Boundary entries are zero. Positive entries mean −Δ_p u exceeds rhs.
inline GridFunction weak_residual(const GridFunction& u, double p, const GridFunction& rhs) {
    require_exponent(p);
    require_same_grid(u, rhs);
    const double h = u.grid().h();
    GridFunction r(u.grid());
    double left = flux(cell_slope(u, 0), p);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double right = flux(cell_slope(u, i), p);
        r.set(i, left - right - h * rhs[i]);
        left = right;
    }
    return r;
}

namespace detail {

/// Nodal zero-order term for the generic minimizer: the energy contains
/// −h Σ_i F(u_i) with f = F' and df = F''.
template <class T>
concept NodalTerm = requires(const T t, std::size_t i, double u) {
    { t.primitive(i, u) } -> std::convertible_to<double>;
    { t.value(i, u) } -> std::convertible_to<double>;
    { t.derivative(i, u) } -> std::convertible_to<double>;
};

/// Linear term with a frozen nodal right-hand side.
struct FrozenRhs {
    std::span<const double> rhs;
    double primitive(std::size_t i, double u) const noexcept { return rhs[i] * u; }
    double value(std::size_t i, double) const noexcept { return rhs[i]; }
    double derivative(std::size_t, double) const noexcept { return 0.0; }
};

struct EnergyEval {
    double value = 0.0;
    double magnitude = 0.0;  // Σ |terms|, used to size the roundoff allowance
};

template <NodalTerm Term>
EnergyEval evaluate_energy(std::span<const double> u, double p, double h, const Term& term) {
    EnergyEval e;
    for (std::size_t c = 0; c + 1 < u.size(); ++c) {
        const double t = std::pow(std::abs((u[c + 1] - u[c]) / h), p) * h / p;
        e.value += t;
        e.magnitude += t;
    }
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double t = h * term.primitive(i, u[i]);
        e.value -= t;
        e.magnitude += std::abs(t);
    }
    return e;
}

/// Gradient at interior nodes, plus the sup of |f| used for tolerance scaling.
template <NodalTerm Term>
double evaluate_gradient(std::span<const double> u, double p, double h, const Term& term,
                         std::vector<double>& grad, double& f_scale) {
    const std::size_t m = u.size() - 2;
    grad.assign(m, 0.0);
    f_scale = 0.0;
    double left = flux((u[1] - u[0]) / h, p);
    double res = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double right = flux((u[i + 1] - u[i]) / h, p);
        const double f = term.value(i, u[i]);
        f_scale = std::max(f_scale, std::abs(f));
        grad[i - 1] = left - right - h * f;
        res = std::max(res, std::abs(grad[i - 1]));
        left = right;
    }
    return res;
}

/// Alternative search direction for minimize_energy: fills `dir` (interior
/// nodes) given the current iterate, or returns false.
template <class T>
concept DirectionProvider = requires(const T t, std::span<const double> u, std::vector<double>& dir) {
    { t(u, dir) } -> std::convertible_to<bool>;
};

struct NoFallback {
    bool operator()(std::span<const double>, std::vector<double>&) const noexcept { return false; }
};

/// Damped Newton descent on the energy
///     E(u) = (1/p) Σ_cells h |u'|^p − h Σ_i F(u_i).
///
/// The Hessian uses regularized weights (s² + ε²)^{(p−2)/2}; the gradient is
/// exact. An optional fallback direction is tried alongside Newton at every
/// step and the lower-energy point wins. If neither gives an acceptable step
/// (nonconvex zero-order terms), the p-Dirichlet part of the Hessian alone is
/// used, which always gives a descent direction. Steps are accepted by Armijo
/// backtracking on the true energy with an allowance for summation roundoff.
template <NodalTerm Term, DirectionProvider Fallback = NoFallback>
SolveReport minimize_energy(GridFunction& u_out, double p, const Term& term, const SolverConfig& cfg,
                            const Fallback& fallback = {}) {
    cfg.validate();
    const Grid& grid = u_out.grid();
    const double h = grid.h();
    std::vector<double> u(u_out.values().begin(), u_out.values().end());
    const std::size_t m = u.size() - 2;

    SolveReport report;
    std::vector<double> grad, diag(m), off(m > 0 ? m - 1 : 0), dir(m), minus_grad(m), w(m + 1);
    std::vector<double> trial(u.size()), best(u.size());
    double f_scale = 0.0;
    EnergyEval e = evaluate_energy<Term>(u, p, h, term);
    double res = evaluate_gradient<Term>(u, p, h, term, grad, f_scale);
    report.energy_history.push_back(e.value);

    const double eps2 = cfg.epsilon_reg * cfg.epsilon_reg;

    // Backtracking along dir from u; on success leaves the point in `trial`.
    auto line_search = [&](EnergyEval& out, double& alpha_out) {
        double slope = 0.0;
        for (std::size_t k = 0; k < m; ++k) slope += grad[k] * dir[k];
        if (!(slope < 0.0) || !std::isfinite(slope)) return false;
        const double noise = 1e-14 * e.magnitude;
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            for (std::size_t k = 0; k < m; ++k) trial[k + 1] = u[k + 1] + alpha * dir[k];
            trial.front() = 0.0;
            trial.back() = 0.0;
            const EnergyEval et = evaluate_energy<Term>(trial, p, h, term);
            if (std::isfinite(et.value) && et.value <= e.value + 1e-4 * alpha * slope + noise) {
                out = et;
                alpha_out = alpha;
                return true;
            }
        }
        return false;
    };

    auto hessian_direction = [&](bool full_hessian) {
        for (std::size_t k = 0; k < m; ++k) {
            diag[k] = w[k] + w[k + 1];
            if (full_hessian) diag[k] -= h * term.derivative(k + 1, u[k + 1]);
        }
        return solve_spd_tridiagonal(diag, off, minus_grad, dir);
    };

    int it = 0;
    int flat_steps = 0;  // consecutive steps whose energy change is below roundoff
    bool stalled = false;
    for (;; ++it) {
        const double tol = cfg.tol_residual * (1.0 + f_scale);
        if (res <= tol) {
            report.status = SolveStatus::converged;
            break;
        }
        if (!std::isfinite(res)) {
            report.status = SolveStatus::diverged;
            break;
        }
        if (it >= cfg.max_inner_iters || stalled) {
            report.status = SolveStatus::max_iters;
            break;
        }

        double wmax = 0.0;
        for (std::size_t c = 0; c <= m; ++c) {
            const double s = (u[c + 1] - u[c]) / h;
            w[c] = (p - 1.0) * std::pow(s * s + eps2, 0.5 * (p - 2.0)) / h;
            wmax = std::max(wmax, w[c]);
        }
        const double wfloor = 1e-14 * wmax;
        for (double& wc : w) wc = std::max(wc, wfloor);
        for (std::size_t k = 0; k < m; ++k) minus_grad[k] = -grad[k];
        for (std::size_t k = 0; k + 1 < m; ++k) off[k] = -w[k + 1];

        bool have = false;
        EnergyEval best_e{}, cand_e{};
        double alpha = 0.0;
        auto consider = [&]() {
            if (line_search(cand_e, alpha) && (!have || cand_e.value < best_e.value)) {
                best_e = cand_e;
                best.swap(trial);
                have = true;
            }
        };
        if (hessian_direction(true)) consider();
        if (fallback(std::span<const double>(u), dir)) consider();
        if (!have && hessian_direction(false)) consider();
        if (!have) {
            stalled = true;
            continue;
        }
        flat_steps = (e.value - best_e.value <= 1e-14 * e.magnitude) ? flat_steps + 1 : 0;
        if (flat_steps >= 8) stalled = true;
        u.swap(best);
        e = best_e;
        res = evaluate_gradient<Term>(u, p, h, term, grad, f_scale);
        report.energy_history.push_back(e.value);
    }

    report.iterations = it;
    report.final_residual = res;
    report.final_energy = e.value;
    u_out = GridFunction(grid, std::move(u));
    report.sup_norm = u_out.all_finite() ? sup_norm(u_out) : std::numeric_limits<double>::infinity();
    return report;
}

} // namespace detail

/// Direct solve of the p = 2 problem −u'' = rhs (lumped right-hand side).
inline GridFunction solve_linear_poisson(const GridFunction& rhs) {
    const Grid& grid = rhs.grid();
    const std::size_t m = static_cast<std::size_t>(grid.n_interior());
    const double h = grid.h();
    std::vector<double> diag(m, 2.0 / h), off(m - 1, -1.0 / h), b(m), x(m);
    for (std::size_t k = 0; k < m; ++k) b[k] = h * rhs[k + 1];
    detail::solve_spd_tridiagonal(diag, off, b, x);
    std::vector<double> v(grid.n_nodes(), 0.0);
    std::copy(x.begin(), x.end(), v.begin() + 1);
    return GridFunction(grid, std::move(v));
}

/// Initial guess for the frozen right-hand-side problem built from the p = 2
/// solution v. In 1D the flux |u'|^{p-2}u' of the p-problem differs from the
/// flux v' of the p = 2 problem by a constant; the constant is fixed by the
/// boundary condition u(b) = 0 through a safeguarded scalar Newton iteration.
/// In exact arithmetic this is already the discrete minimizer.
inline GridFunction flux_transformed_guess(const GridFunction& rhs, double p) {
    const GridFunction v = solve_linear_poisson(rhs);
    if (p == 2.0) return v;
    const Grid& grid = rhs.grid();
    const std::size_t n = static_cast<std::size_t>(grid.n_cells());
    const double h = grid.h();
    const double inv = 1.0 / (p - 1.0);
    std::vector<double> t(n);
    for (std::size_t c = 0; c < n; ++c) t[c] = cell_slope(v, c);
    const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
    // g(δ) = Σ ψ(t_c + δ), ψ(σ) = sgn(σ)|σ|^{1/(p−1)}, is increasing; root in [−max t, −min t].
    double lo = -*tmax, hi = -*tmin;
    auto g = [&](double d, double* dg) {
        double s = 0.0, ds = 0.0;
        for (double tc : t) {
            const double a = std::abs(tc + d);
            s += std::copysign(std::pow(a, inv), tc + d);
            if (dg != nullptr && a > 0.0) ds += inv * std::pow(a, inv - 1.0);
        }
        if (dg != nullptr) *dg = ds;
        return s;
    };
    double d = 0.0;
    if (hi > lo) {
        d = std::clamp(0.0, lo, hi);
        for (int k = 0; k < 200; ++k) {
            double dg = 0.0;
            const double gv = g(d, &dg);
            if (gv == 0.0) break;
            if (gv > 0.0) hi = d;
            else lo = d;
            double next = (std::isfinite(dg) && dg > 0.0) ? d - gv / dg : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (next == d || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
                d = next;
                break;
            }
            d = next;
        }
    }
    std::vector<double> u(grid.n_nodes(), 0.0);
    for (std::size_t c = 0; c + 1 < n; ++c) {
        const double s = t[c] + d;
        u[c + 1] = u[c] + h * std::copysign(std::pow(std::abs(s), inv), s);
    }
    return GridFunction(grid, std::move(u));
}

struct PoissonSolution {
    GridFunction u;
    SolveReport report;
};

/// Minimizes energy(·, p, rhs) over grid functions vanishing on the boundary,
/// i.e. solves −Δ_p u = rhs weakly, by damped Newton. Without an explicit
/// initial guess the flux-transformed p = 2 solution is used.
inline PoissonSolution solve_p_poisson(const GridFunction& rhs, double p, const SolverConfig& cfg = {},
                                       const GridFunction* initial = nullptr) {
    require_solver_exponent(p);
    if (!rhs.all_finite()) throw Error(ErrorCode::non_finite_input, "non-finite-rhs: right-hand side has non-finite entries");
    cfg.validate();

    GridFunction u(rhs.grid());
    if (initial != nullptr) {
        require_same_grid(*initial, rhs);
        u = *initial;
    } else {
        u = flux_transformed_guess(rhs, p);
    }
    const auto rv = rhs.values();
    detail::FrozenRhs term{rv};
    SolveReport report = detail::minimize_energy(u, p, term, cfg);
    return {std::move(u), std::move(report)};
}

} // namespace plap
