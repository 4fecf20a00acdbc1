#pragma once

/// Monotone sub/supersolution iteration for
///
///     −Δ_p u = Λ u^{q−1} + u^{r−1},  u = 0 on the boundary.
///
/// Starting from a subsolution w₀, each step solves the frozen problem
/// −Δ_p w_k = Λ w_{k−1}^{q−1} + w_{k−1}^{r−1}. The sequence is nodally
/// non-decreasing and, when a supersolution is supplied, trapped below it.
/// Without a supersolution the run either settles (converged) or passes the
/// blow-up cap (diverged).

#include "plap/bounds.hpp"
#include "plap/core.hpp"
#include "plap/eigen.hpp"
#include "plap/model_problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace plap {

/// Lowest subsolution used for the iteration: the positive solution of
/// −Δ_p w = Λ w^{q−1}. The dropped w^{r−1} term is nonnegative.
inline GridFunction build_subsolution(double Lambda, const Params& params, const Grid& grid,
                                      const SolverConfig& cfg = {}) {
    if (!(Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0 for a subsolution");
    return solve_concave(Lambda, params, grid, cfg).u;
}

/// Relative slack on the supersolution test λ ≥ ∥u_Λ∥_∞^{r−p}; Λ = Λ̃ sits
/// exactly on its boundary.
inline constexpr double kSupersolutionSlack = 1e-9;

/// u_Λ solving −Δ_p u = λ u^{p−1} + Λ u^{q−1} is a supersolution exactly when
/// λ ≥ ∥u_Λ∥_∞^{r−p}. Returns it in that case and nothing otherwise. The
/// default λ is t_q λ₁.
inline std::optional<GridFunction> build_supersolution(double Lambda, const Params& params, const Grid& grid,
                                                       const EigenResult& eig, const SolverConfig& cfg = {},
                                                       std::optional<double> lambda_choice = std::nullopt) {
    if (!(Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0 for a supersolution");
    const double lam = lambda_choice.value_or(t_q(params.p, params.q, params.r) * eig.lambda1);
    if (!(lam > 0.0 && lam < eig.lambda1)) {
        throw Error(ErrorCode::invalid_parameter, "lambda_choice must lie in (0, lambda1)");
    }
    auto sol = solve_linear_concave(lam, Lambda, params, grid, eig, cfg);
    if (lam >= std::pow(sol.sup_norm, params.r - params.p) * (1.0 - kSupersolutionSlack)) return std::move(sol.u);
    return std::nullopt;
}

enum class IterationStatus { converged, diverged, inconclusive };

constexpr const char* to_string(IterationStatus s) noexcept {
    switch (s) {
    case IterationStatus::converged: return "converged";
    case IterationStatus::diverged: return "diverged";
    case IterationStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// Live state handed to an observer after every step.
struct IterationState {
    double Lambda = 0.0;
    const GridFunction* sub = nullptr;
    const GridFunction* super = nullptr;  // null when unguarded
    std::vector<double> iterates_supnorm;
    const GridFunction* previous = nullptr;  // w_{k−1}
    const GridFunction* current = nullptr;   // w_k
    int k = 0;
};

struct TraceRow {
    int k = 0;
    double sup_norm = 0.0;
    double residual = 0.0;
};

struct IterationOutcome {
    IterationStatus status = IterationStatus::inconclusive;
    std::optional<GridFunction> solution;
    int k_final = 0;
    /// Full-equation weak residual at the last iterate.
    double residual = 0.0;
    std::vector<TraceRow> trace;
    /// max_k max_i (w_{k−1} − w_k)_i; ≤ tol_step for a monotone run.
    double max_decrease = 0.0;
    /// max_k max_i (w_k − ū)_i; only meaningful with a supersolution.
    double max_above_super = -std::numeric_limits<double>::infinity();
    std::string diagnostics;
};

struct IterationOptions {
    int max_outer = 2000;
    bool record_trace = true;
};

/// Nodal right-hand side Λ (w⁺)^{q−1} + (w⁺)^{r−1}.
inline GridFunction concave_convex_rhs(const GridFunction& w, double Lambda, const Params& params) {
    return w.map([&](double v) {
        if (v <= 0.0) return 0.0;
        return Lambda * std::pow(v, params.q - 1.0) + std::pow(v, params.r - 1.0);
    });
}

/// sup-norm of the weak residual of −Δ_p u = Λ u^{q−1} + u^{r−1}, together
/// with the tolerance scale 1 + sup of the right-hand side.
inline std::pair<double, double> concave_convex_residual(const GridFunction& u, double Lambda, const Params& params) {
    const GridFunction rhs = concave_convex_rhs(u, Lambda, params);
    return {sup_norm(weak_residual(u, params.p, rhs)), 1.0 + sup_norm(rhs)};
}

inline IterationOutcome iterate(double Lambda, const Params& params, const GridFunction& sub,
                                const GridFunction* super, const SolverConfig& cfg = {},
                                const IterationOptions& opts = {},
                                const std::function<void(const IterationState&)>& observer = {}) {
    params.validate();
    cfg.validate();
    if (!(Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0");
    require_finite(sub, "subsolution");
    if (!(sub.interior_min() > 0.0)) throw Error(ErrorCode::not_positive, "subsolution must be > 0 at interior nodes");
    if (super != nullptr) require_same_grid(sub, *super);

    IterationOutcome out;
    IterationState state;
    state.Lambda = Lambda;
    state.sub = &sub;
    state.super = super;
    state.iterates_supnorm.push_back(sup_norm(sub));

    GridFunction prev = sub;
    for (int k = 1; k <= opts.max_outer; ++k) {
        const GridFunction rhs = concave_convex_rhs(prev, Lambda, params);
        if (!rhs.all_finite()) {
            out.status = IterationStatus::diverged;
            out.k_final = k;
            out.diagnostics = "right-hand side overflowed";
            return out;
        }
        auto [w, rep] = solve_p_poisson(rhs, params.p, cfg);
        out.k_final = k;
        const double s = w.all_finite() ? sup_norm(w) : std::numeric_limits<double>::infinity();
        if (!(s <= cfg.blowup_cap)) {
            out.status = IterationStatus::diverged;
            out.diagnostics = "sup norm exceeded blowup_cap";
            if (opts.record_trace) out.trace.push_back({k, s, std::numeric_limits<double>::quiet_NaN()});
            return out;
        }
        if (rep.status != SolveStatus::converged) {
            out.status = IterationStatus::inconclusive;
            out.diagnostics = std::string("inner solve ended with status ") + to_string(rep.status) + " at step " +
                              std::to_string(k);
            return out;
        }

        double step = 0.0;
        for (std::size_t i = 1; i + 1 < w.size(); ++i) {
            step = std::max(step, std::abs(w[i] - prev[i]));
            out.max_decrease = std::max(out.max_decrease, prev[i] - w[i]);
            if (super != nullptr) out.max_above_super = std::max(out.max_above_super, w[i] - (*super)[i]);
        }
        const auto [res, scale] = concave_convex_residual(w, Lambda, params);
        out.residual = res;
        if (opts.record_trace) out.trace.push_back({k, s, res});
        state.iterates_supnorm.push_back(s);
        state.k = k;
        if (observer) {
            state.previous = &prev;
            state.current = &w;
            observer(state);
        }
        const bool done = step <= cfg.tol_step && res <= cfg.tol_residual * scale;
        prev = std::move(w);
        if (done) {
            out.status = IterationStatus::converged;
            out.solution = std::move(prev);
            return out;
        }
    }
    out.status = IterationStatus::inconclusive;
    out.diagnostics = "no decision within " + std::to_string(opts.max_outer) + " outer iterations";
    return out;
}

inline void write_trace_csv(std::ostream& os, const IterationOutcome& out) {
    const auto old = os.precision(12);
    os << "k,sup_norm,residual\n";
    for (const auto& row : out.trace) os << row.k << ',' << row.sup_norm << ',' << row.residual << '\n';
    os.precision(old);
}

} // namespace plap
