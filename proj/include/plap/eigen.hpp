#pragma once

/// First Dirichlet eigenpair of the discrete p-Laplacian and the nodal
/// supersolution certificate −Δ_p v ≥ λ v^{p−1}.

#include "plap/core.hpp"
#include "plap/error.hpp"
#include "plap/grid.hpp"

#include <cmath>
#include <vector>

namespace plap {

struct EigenResult {
    double lambda1 = 0.0;
    GridFunction eigenfunction;  // positive, lp_norm(·, p) = 1
    std::vector<double> rayleigh_history;
    int iterations = 0;
    bool converged = false;
};

/// w1p_seminorm(u)^p / lp_norm(u)^p
inline double rayleigh_quotient(const GridFunction& u, double p) {
    const double den = std::pow(lp_norm(u, p), p);
    if (!(den > 0.0)) throw Error(ErrorCode::zero_function, "Rayleigh quotient of the zero function");
    return std::pow(w1p_seminorm(u, p), p) / den;
}

/// Nodal values of (x − a)(b − x), normalized to unit L^p norm.
inline GridFunction positive_bubble(const Grid& grid, double p) {
    auto u = GridFunction::interpolate(grid, [&](double x) { return (x - grid.a()) * (grid.b() - x); });
    u *= 1.0 / lp_norm(u, p);
    return u;
}

struct EigenOptions {
    /// Cap on inverse-iteration steps.
    int max_iters = 500;
    /// Eigenfunction sup-norm change required in addition to the eigenvalue
    /// test. Inverse iteration resolves the eigenvalue to roughly the square
    /// of the eigenvector accuracy, so the vector needs its own criterion.
    double tol_vector = 1e-8;
};

/// Inverse-power iteration: solve −Δ_p u_{k+1} = λ_k u_k^{p−1}, renormalize,
/// λ_{k+1} = Rayleigh quotient. Stops when |λ_{k+1} − λ_k| ≤ tol_step·λ_k and
/// the eigenfunction has settled. `start` must be positive at interior nodes;
/// the default start is the positive bubble.
inline EigenResult first_eigenpair(double p, const Grid& grid, const SolverConfig& cfg = {},
                                   const GridFunction* start = nullptr, const EigenOptions& opts = {}) {
    require_solver_exponent(p);
    cfg.validate();
    GridFunction u = positive_bubble(grid, p);
    if (start != nullptr) {
        require_same_grid(*start, u);
        if (!(start->interior_min() > 0.0)) throw Error(ErrorCode::not_positive, "eigen start vector must be positive");
        u = *start;
        u *= 1.0 / lp_norm(u, p);
    }

    EigenResult res{0.0, u, {}, 0, false};
    double lambda = rayleigh_quotient(u, p);
    res.rayleigh_history.push_back(lambda);
    for (int k = 1; k <= opts.max_iters; ++k) {
        const GridFunction rhs = u.map([&](double v) { return lambda * std::pow(std::max(v, 0.0), p - 1.0); });
        auto [next, rep] = solve_p_poisson(rhs, p, cfg);
        if (rep.status != SolveStatus::converged) {
            throw Error(ErrorCode::solver_failure, "inner p-Poisson solve failed during eigen iteration");
        }
        next *= 1.0 / lp_norm(next, p);
        const double lambda_next = rayleigh_quotient(next, p);
        const double step = sup_norm(next - u);
        res.rayleigh_history.push_back(lambda_next);
        res.iterations = k;
        const bool done = std::abs(lambda_next - lambda) <= cfg.tol_step * lambda && step <= opts.tol_vector;
        u = std::move(next);
        lambda = lambda_next;
        if (done) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged) {
        throw Error(ErrorCode::solver_failure,
                    "eigen iteration did not converge in " + std::to_string(opts.max_iters) + " steps (max_iters)");
    }
    res.lambda1 = lambda;
    res.eigenfunction = std::move(u);
    return res;
}

struct SupersolutionCertificate {
    bool holds = false;
    std::size_t worst_node = 0;
    double margin = 0.0;
};

/// holds iff the nodal weak residual of −Δ_p v − λ v^{p−1} is ≥ −tol at every
/// interior node; margin is the minimum nodal residual.
inline SupersolutionCertificate check_supersolution(const GridFunction& v, double lambda, double p,
                                                    double tol = SolverConfig{}.tol_residual) {
    require_exponent(p);
    require_finite(v);
    if (!(v.interior_min() > 0.0)) throw Error(ErrorCode::not_positive, "supersolution candidate must be > 0 at interior nodes");
    const GridFunction rhs = v.map([&](double x) { return lambda * std::pow(x, p - 1.0); });
    const GridFunction r = weak_residual(v, p, rhs);
    SupersolutionCertificate cert;
    cert.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        if (r[i] < cert.margin) {
            cert.margin = r[i];
            cert.worst_node = i;
        }
    }
    cert.holds = cert.margin >= -tol;
    return cert;
}

struct LambdaBracket {
    double lo = 0.0;  // certified
    double hi = 0.0;  // not certified
};

/// Bisection for the largest λ certified by check_supersolution(v, ·, p):
/// the discrete form of λ₁ = sup{λ : ∃ v > 0, −Δ_p v ≥ λ v^{p−1}}.
/// Requires lo certified and hi not; stops when hi − lo ≤ 2·tol_lambda.
inline LambdaBracket certified_lambda_bracket(const GridFunction& v, double p, double lo, double hi,
                                              double tol_lambda, double tol_residual = SolverConfig{}.tol_residual) {
    if (!check_supersolution(v, lo, p, tol_residual).holds || check_supersolution(v, hi, p, tol_residual).holds) {
        throw Error(ErrorCode::bracket_inverted, "initial certificate bracket is not ordered");
    }
    while (hi - lo > 2.0 * tol_lambda) {
        const double mid = 0.5 * (lo + hi);
        if (check_supersolution(v, mid, p, tol_residual).holds) lo = mid;
        else hi = mid;
    }
    return {lo, hi};
}

} // namespace plap
