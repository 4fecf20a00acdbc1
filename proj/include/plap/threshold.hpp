#pragma once

/// Empirical bracketing of the existence threshold Λ_{q,r} by bisection on Λ,
/// classifying each Λ with the monotone iteration, and the q → p sweep.

#include "plap/bounds.hpp"
#include "plap/eigen.hpp"
#include "plap/model_problems.hpp"
#include "plap/monotone_iteration.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace plap {

struct ThresholdBracket {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double lambda1 = 0.0;
    double c_at_tq = 0.0;
    double lambda_tilde = 0.0;
    double lambda_hat = 0.0;
    /// Midpoint of the final bracket.
    std::optional<double> lambda_emp;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int n_inconclusive = 0;
    int bisection_steps = 0;
    /// Some classification above Λ̃ ran without a supersolution; its verdict
    /// assumes the subsolution lies below every positive solution.
    bool unguarded = false;

    double relative_width() const { return (bracket_hi - bracket_lo) / bracket_lo; }
};

struct ThresholdOptions {
    double rel_width = 1e-3;
    int max_steps = 40;
    /// Upper starting point as a multiple of Λ̂.
    double hi_factor = 1.01;
    IterationOptions iteration{2000, false};
};

namespace detail {

struct Classifier {
    const Params& params;
    const Grid& grid;
    const EigenResult& eig;
    const SolverConfig& cfg;
    IterationOptions iteration;
    bool* unguarded;

    IterationStatus operator()(double Lambda, int max_outer) const {
        const GridFunction sub = build_subsolution(Lambda, params, grid, cfg);
        const auto super = build_supersolution(Lambda, params, grid, eig, cfg);
        if (!super && unguarded != nullptr) *unguarded = true;
        IterationOptions opts = iteration;
        opts.max_outer = max_outer;
        return iterate(Lambda, params, sub, super ? &*super : nullptr, cfg, opts).status;
    }
};

} // namespace detail

/// Bisection on Λ over [Λ̃, 1.01 Λ̂]. Converged runs raise the lower end and
/// diverged runs lower the upper end. An inconclusive midpoint is retried
/// once with twice the iteration budget; if it stays inconclusive it is
/// counted, and the quarter points on either side are classified instead.
/// When those are inconclusive too the bracket stops shrinking.
inline ThresholdBracket empirical_threshold(const Params& params, const Grid& grid, const EigenResult& eig,
                                            const SolverConfig& cfg = {}, const ThresholdOptions& opts = {}) {
    params.validate();
    const auto [p, q, r] = std::tuple{params.p, params.q, params.r};
    ThresholdBracket b;
    b.p = p;
    b.q = q;
    b.r = r;
    b.lambda1 = eig.lambda1;
    b.c_at_tq = c_constant(params, t_q(p, q, r) * eig.lambda1, grid, eig, cfg);
    b.lambda_hat = lambda_hat(p, q, r, eig.lambda1);
    b.lambda_tilde = lambda_tilde(p, q, r, eig.lambda1, b.c_at_tq);

    const detail::Classifier classify{params, grid, eig, cfg, opts.iteration, &b.unguarded};
    const int budget = opts.iteration.max_outer;
    auto decide = [&](double Lambda) {
        IterationStatus s = classify(Lambda, budget);
        if (s == IterationStatus::inconclusive) s = classify(Lambda, 2 * budget);
        return s;
    };

    double lo = b.lambda_tilde;
    double hi = opts.hi_factor * b.lambda_hat;
    // Λ̃ itself runs guarded, so only the upper end can flag unguarded use.
    if (decide(lo) != IterationStatus::converged) {
        throw Error(ErrorCode::bracket_inverted, "iteration at Lambda_tilde did not converge; check solver tolerances");
    }
    const bool saved_unguarded = b.unguarded;
    if (decide(hi) != IterationStatus::diverged) {
        throw Error(ErrorCode::bracket_inverted, "iteration above Lambda_hat did not diverge; check solver tolerances");
    }
    b.unguarded = saved_unguarded;

    int steps = 0;
    while (steps < opts.max_steps && (hi - lo) > opts.rel_width * lo) {
        ++steps;
        const double mid = 0.5 * (lo + hi);
        const IterationStatus s = decide(mid);
        if (s == IterationStatus::converged) {
            lo = mid;
        } else if (s == IterationStatus::diverged) {
            hi = mid;
        } else {
            ++b.n_inconclusive;
            const double left = 0.5 * (lo + mid);
            const double right = 0.5 * (mid + hi);
            const IterationStatus sl = decide(left);
            const IterationStatus sr = decide(right);
            if (sl == IterationStatus::inconclusive) ++b.n_inconclusive;
            if (sr == IterationStatus::inconclusive) ++b.n_inconclusive;
            bool moved = false;
            if (sl == IterationStatus::converged) lo = left, moved = true;
            if (sr == IterationStatus::diverged) hi = right, moved = true;
            if (!moved) break;
        }
    }
    b.bisection_steps = steps;
    b.bracket_lo = lo;
    b.bracket_hi = hi;
    b.lambda_emp = 0.5 * (lo + hi);
    return b;
}

struct SweepRow {
    double q = 0.0;
    std::optional<ThresholdBracket> bracket;
    std::string error;

    bool ok() const noexcept { return bracket.has_value(); }
    /// |Λ_emp − λ₁|
    double distance_to_lambda1() const { return std::abs(*bracket->lambda_emp - bracket->lambda1); }
    /// Λ̂ − Λ̃
    double bound_gap() const { return bracket->lambda_hat - bracket->lambda_tilde; }
};

/// One bracket per q. λ₁ is computed once for the grid before the rows run;
/// rows are independent and run on up to `jobs` threads. A failing row keeps
/// its error message and the sweep continues.
inline std::vector<SweepRow> sweep_q(double p, double r, const std::vector<double>& q_list, const Grid& grid,
                                     const SolverConfig& cfg = {}, const ThresholdOptions& opts = {}, int jobs = 1,
                                     const EigenResult* eig_in = nullptr) {
    if (q_list.empty()) throw Error(ErrorCode::invalid_parameter, "q_list is empty");
    for (std::size_t i = 1; i < q_list.size(); ++i) {
        if (!(q_list[i] > q_list[i - 1])) throw Error(ErrorCode::invalid_parameter, "q_list must be sorted increasing");
    }
    const EigenResult eig = eig_in != nullptr ? *eig_in : first_eigenpair(p, grid, cfg);

    std::vector<SweepRow> rows(q_list.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            rows[i].q = q_list[i];
            try {
                rows[i].bracket = empirical_threshold(make_params(p, q_list[i], r), grid, eig, cfg, opts);
            } catch (const std::exception& ex) {
                rows[i].error = ex.what();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "p,q,r,lambda1,lambda_tilde,lambda_emp,lambda_hat,bracket_lo,bracket_hi,n_inconclusive";

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_bracket_row(std::ostream& os, const ThresholdBracket& b) {
    os << format_number(b.p) << ',' << format_number(b.q) << ',' << format_number(b.r) << ','
       << format_number(b.lambda1) << ',' << format_number(b.lambda_tilde) << ','
       << (b.lambda_emp ? format_number(*b.lambda_emp) : std::string()) << ',' << format_number(b.lambda_hat) << ','
       << format_number(b.bracket_lo) << ',' << format_number(b.bracket_hi) << ',' << b.n_inconclusive << '\n';
}

/// Failed rows keep p, q, r and leave the remaining fields empty.
inline void write_sweep_csv(std::ostream& os, double p, double r, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        if (row.ok()) {
            write_bracket_row(os, *row.bracket);
        } else {
            os << format_number(p) << ',' << format_number(row.q) << ',' << format_number(r) << ",,,,,,,\n";
        }
    }
}

/// gnuplot script plotting Λ̃, Λ_emp, Λ̂ and λ₁ against q from `csv_name`.
inline void write_sweep_plot_script(std::ostream& os, const std::string& csv_name, const std::string& png_name) {
    os << "# Existence threshold bounds versus q\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output '" << png_name << "'\n"
       << "set xlabel 'q'\n"
       << "set ylabel 'Lambda'\n"
       << "set grid\n"
       << "plot '" << csv_name << "' using 2:5 with linespoints title 'lambda_tilde', \\\n"
       << "     '' using 2:6 with linespoints title 'lambda_emp', \\\n"
       << "     '' using 2:7 with linespoints title 'lambda_hat', \\\n"
       << "     '' using 2:4 with lines dashtype 2 title 'lambda1'\n";
}

} // namespace plap
