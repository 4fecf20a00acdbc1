#pragma once

/// Command-line front end. All options live on the top-level app so that a
/// flat key=value config file can set any of them; subcommands only pick the
/// computation.
///
/// Exit codes: 0 success, 1 invalid input or failed check, 2 diverged,
/// 3 inconclusive.

#include "plap/plap.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace plap::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kDiverged = 2, kInconclusive = 3 };

struct RunConfig {
    std::string command;
    std::string kind;  // solve only

    double a = 0.0;
    double b = 1.0;
    int cells = 1024;

    double p = 2.0;
    double q = 1.5;
    double r = 3.0;
    std::optional<double> Lambda;
    double lambda_frac = 0.0;
    double coeff = 1.0;

    std::vector<double> q_list{1.6, 1.8, 1.9, 1.95};
    std::vector<double> lambda_fracs{0.0, 0.3, 0.6};
    int jobs = 1;
    bool refine = false;
    int refine_cells = 2048;

    int max_outer = 2000;
    double rel_width = 1e-3;
    int max_steps = 40;

    SolverConfig solver;

    std::uint64_t seed = 0;
    bool random_start = false;
    bool verbose = false;
    std::string out = "plap_out";
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    if (!c.kind.empty()) j["kind"] = c.kind;
    j["a"] = c.a;
    j["b"] = c.b;
    j["cells"] = c.cells;
    j["p"] = c.p;
    j["q"] = c.q;
    j["r"] = c.r;
    j["Lambda"] = c.Lambda ? nlohmann::ordered_json(*c.Lambda) : nlohmann::ordered_json(nullptr);
    j["lambda-frac"] = c.lambda_frac;
    j["coeff"] = c.coeff;
    j["q-list"] = c.q_list;
    j["lambda-fracs"] = c.lambda_fracs;
    j["jobs"] = c.jobs;
    j["refine"] = c.refine;
    j["refine-cells"] = c.refine_cells;
    j["max-outer"] = c.max_outer;
    j["rel-width"] = c.rel_width;
    j["max-steps"] = c.max_steps;
    j["tol-residual"] = c.solver.tol_residual;
    j["tol-step"] = c.solver.tol_step;
    j["max-inner-iters"] = c.solver.max_inner_iters;
    j["epsilon-reg"] = c.solver.epsilon_reg;
    j["blowup-cap"] = c.solver.blowup_cap;
    j["seed"] = c.seed;
    j["random-start"] = c.random_start;
    j["verbose"] = c.verbose;
    j["out"] = c.out;
    return j;
}

namespace detail {

namespace fs = std::filesystem;

inline fs::path prepare_out(const RunConfig& c) {
    fs::path dir(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

inline std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    return os;
}

inline void write_json(const fs::path& path, const nlohmann::ordered_json& j) { open_out(path) << j.dump(2) << '\n'; }

inline void echo_config(const RunConfig& c, const fs::path& dir) { write_json(dir / "config.json", to_json(c)); }

inline Params params_of(const RunConfig& c) { return make_params(c.p, c.q, c.r); }

inline ThresholdOptions threshold_options(const RunConfig& c) {
    ThresholdOptions t;
    t.rel_width = c.rel_width;
    t.max_steps = c.max_steps;
    t.iteration.max_outer = c.max_outer;
    t.iteration.record_trace = false;
    return t;
}

/// Checks everything the command will need before any computation starts.
inline void validate(const RunConfig& c) {
    c.solver.validate();
    make_grid(c.a, c.b, c.cells);
    require_solver_exponent(c.p);
    if (c.jobs < 1) throw Error(ErrorCode::invalid_config, "jobs must be >= 1");
    if (c.max_outer < 1) throw Error(ErrorCode::invalid_config, "max-outer must be >= 1");
    if (c.max_steps < 1) throw Error(ErrorCode::invalid_config, "max-steps must be >= 1");
    if (!(c.rel_width > 0.0)) throw Error(ErrorCode::invalid_config, "rel-width must be > 0");
    const bool needs_q = c.command != "eigen" && c.command != "sweep";
    const bool needs_r = c.command == "iterate" || c.command == "threshold" || c.command == "sweep" ||
                         (c.command == "solve" && c.kind == "concave-convex");
    if (needs_q && needs_r) params_of(c);
    if (needs_q && !needs_r) make_params(c.p, c.q, std::max(c.r, c.p + 1.0));
    if (c.command == "sweep") {
        if (c.q_list.empty()) throw Error(ErrorCode::invalid_parameter, "q-list is empty");
        if (!(c.r > c.p)) throw Error(ErrorCode::invalid_parameter, "r must be > p");
        if (c.refine) make_grid(c.a, c.b, c.refine_cells);
    }
    if (c.command == "iterate" || (c.command == "solve" && c.kind == "concave-convex")) {
        if (!c.Lambda) throw Error(ErrorCode::invalid_config, "--Lambda is required");
        if (!(*c.Lambda > 0.0)) throw Error(ErrorCode::nonpositive_lambda, "Lambda must be > 0");
    }
    if (c.command == "solve" && c.kind == "concave" && c.Lambda && !(*c.Lambda >= 0.0)) {
        throw Error(ErrorCode::invalid_parameter, "Lambda must be >= 0");
    }
    if (c.command == "solve" && c.kind == "linear-concave") {
        if (!(c.lambda_frac >= 0.0)) throw Error(ErrorCode::invalid_parameter, "lambda-frac must be >= 0");
        if (c.lambda_frac >= 1.0) {
            throw Error(ErrorCode::lambda_too_large, "lambda-frac must be < 1: no positive solution for lambda >= lambda1");
        }
        if (c.lambda_frac > kLambdaCapFraction) {
            throw Error(ErrorCode::lambda_too_large, "lambda-frac exceeds the cap 1 - 1e-3");
        }
        if (!(c.coeff > 0.0)) throw Error(ErrorCode::invalid_parameter, "coeff must be > 0");
    }
    if (c.command == "verify") {
        for (double f : c.lambda_fracs) {
            if (!(f >= 0.0 && f <= kLambdaCapFraction)) {
                throw Error(ErrorCode::lambda_too_large, "every lambda-fracs entry must lie in [0, 1 - 1e-3]");
            }
        }
    }
}

/// Positive start vector x(b−x)(1 + 0.5 U) with U uniform on [0, 1).
inline GridFunction random_positive(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    GridFunction u(grid);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double x = grid.node(i);
        u.set(i, (x - grid.a()) * (grid.b() - x) * (1.0 + 0.5 * unif(rng)));
    }
    return u;
}

inline std::string num(double v) { return format_number(v); }

inline int cmd_eigen(const RunConfig& c, std::ostream& out) {
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    const std::optional<GridFunction> start =
        c.random_start ? std::optional<GridFunction>(random_positive(grid, c.seed)) : std::nullopt;
    const EigenResult eig = first_eigenpair(c.p, grid, c.solver, start ? &*start : nullptr);
    out << "lambda1 = " << num(eig.lambda1) << '\n';
    auto csv = open_out(dir / "eigenfunction.csv");
    write_csv(csv, eig.eigenfunction);
    nlohmann::ordered_json j;
    j["p"] = c.p;
    j["cells"] = c.cells;
    j["lambda1"] = eig.lambda1;
    j["iterations"] = eig.iterations;
    j["converged"] = eig.converged;
    write_json(dir / "eigen.json", j);
    return kOk;
}

inline int exit_for(IterationStatus s) {
    switch (s) {
    case IterationStatus::converged: return kOk;
    case IterationStatus::diverged: return kDiverged;
    case IterationStatus::inconclusive: return kInconclusive;
    }
    return kInvalid;
}

/// Shared by `solve concave-convex` and `iterate`; the latter always writes
/// the trace and adds the ordering diagnostics.
inline int run_concave_convex(const RunConfig& c, std::ostream& out, bool with_diagnostics) {
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const Params prm = params_of(c);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    const double Lambda = *c.Lambda;

    const GridFunction sub = build_subsolution(Lambda, prm, grid, c.solver);
    std::optional<GridFunction> super;
    // Above Λ̂ no supersolution can exist, so skip the eigen solve there.
    const EigenResult eig = first_eigenpair(c.p, grid, c.solver);
    const double hat = lambda_hat(c.p, c.q, c.r, eig.lambda1);
    if (Lambda <= hat) super = build_supersolution(Lambda, prm, grid, eig, c.solver);

    IterationOptions opts;
    opts.max_outer = c.max_outer;
    opts.record_trace = true;
    const IterationOutcome res = iterate(Lambda, prm, sub, super ? &*super : nullptr, c.solver, opts);

    out << "status = " << to_string(res.status) << '\n'
        << "k_final = " << res.k_final << '\n'
        << "supersolution = " << (super ? "yes" : "no") << '\n';
    if (res.solution) out << "sup_norm = " << num(sup_norm(*res.solution)) << '\n';
    if (!res.diagnostics.empty()) out << "diagnostics = " << res.diagnostics << '\n';

    nlohmann::ordered_json j;
    j["status"] = to_string(res.status);
    j["k_final"] = res.k_final;
    j["residual"] = res.residual;
    j["sup_norm"] = res.solution ? nlohmann::ordered_json(sup_norm(*res.solution)) : nlohmann::ordered_json(nullptr);
    j["Lambda"] = Lambda;
    j["lambda1"] = eig.lambda1;
    j["lambda_hat"] = hat;
    j["supersolution"] = super.has_value();
    if (with_diagnostics) {
        j["max_decrease"] = res.max_decrease;
        j["max_above_super"] = super ? nlohmann::ordered_json(res.max_above_super) : nlohmann::ordered_json(nullptr);
        out << "max_decrease = " << num(res.max_decrease) << '\n';
        if (super) out << "max_above_super = " << num(res.max_above_super) << '\n';
    }
    j["diagnostics"] = res.diagnostics;
    write_json(dir / "report.json", j);
    if (res.solution) {
        auto csv = open_out(dir / "solution.csv");
        write_csv(csv, *res.solution);
    }
    if (c.verbose || with_diagnostics) {
        auto csv = open_out(dir / "trace.csv");
        write_trace_csv(csv, res);
    }
    return exit_for(res.status);
}

inline int cmd_solve(const RunConfig& c, std::ostream& out) {
    if (c.kind == "concave-convex") return run_concave_convex(c, out, false);
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    // r plays no part in the model problems; any r > p satisfies Params.
    const Params prm = make_params(c.p, c.q, std::max(c.r, c.p + 1.0));
    std::optional<GridFunction> u;
    SolveReport rep;
    if (c.kind == "concave") {
        auto sol = solve_concave(c.Lambda.value_or(1.0), prm, grid, c.solver);
        u = std::move(sol.u);
        rep = std::move(sol.report);
    } else {
        const EigenResult eig = first_eigenpair(c.p, grid, c.solver);
        auto sol = solve_linear_concave(c.lambda_frac * eig.lambda1, c.coeff, prm, grid, eig, c.solver);
        out << "lambda1 = " << num(eig.lambda1) << '\n' << "c_value = " << num(sol.c_value) << '\n';
        u = std::move(sol.u);
        rep = std::move(sol.report);
    }
    out << "status = " << to_string(rep.status) << '\n' << "sup_norm = " << num(rep.sup_norm) << '\n';
    auto csv = open_out(dir / "solution.csv");
    write_csv(csv, *u);
    write_json(dir / "report.json", plap::to_json(rep));
    return kOk;
}

inline nlohmann::ordered_json to_json(const ThresholdBracket& b) {
    nlohmann::ordered_json j;
    j["p"] = b.p;
    j["q"] = b.q;
    j["r"] = b.r;
    j["lambda1"] = b.lambda1;
    j["c_at_tq"] = b.c_at_tq;
    j["lambda_tilde"] = b.lambda_tilde;
    j["lambda_emp"] = b.lambda_emp ? nlohmann::ordered_json(*b.lambda_emp) : nlohmann::ordered_json(nullptr);
    j["lambda_hat"] = b.lambda_hat;
    j["bracket_lo"] = b.bracket_lo;
    j["bracket_hi"] = b.bracket_hi;
    j["n_inconclusive"] = b.n_inconclusive;
    j["bisection_steps"] = b.bisection_steps;
    j["unguarded"] = b.unguarded;
    return j;
}

inline constexpr const char* kUnguardedNote =
    "Classifications between lambda_tilde and lambda_hat that ran without a supersolution assume the\n"
    "subsolution lies below every positive solution. Under that assumption a converged run certifies\n"
    "existence and a diverged run is read as nonexistence.\n";

inline int cmd_threshold(const RunConfig& c, std::ostream& out) {
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const Params prm = params_of(c);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    const EigenResult eig = first_eigenpair(c.p, grid, c.solver);
    const ThresholdBracket b = empirical_threshold(prm, grid, eig, c.solver, threshold_options(c));
    out << "lambda1 = " << num(b.lambda1) << '\n'
        << "lambda_tilde = " << num(b.lambda_tilde) << '\n'
        << "lambda_emp = " << num(*b.lambda_emp) << '\n'
        << "lambda_hat = " << num(b.lambda_hat) << '\n'
        << "bracket = [" << num(b.bracket_lo) << ", " << num(b.bracket_hi) << "]\n"
        << "n_inconclusive = " << b.n_inconclusive << '\n';
    auto csv = open_out(dir / "threshold.csv");
    csv << kSweepCsvHeader << '\n';
    write_bracket_row(csv, b);
    write_json(dir / "threshold.json", to_json(b));
    if (b.unguarded) open_out(dir / "notes.txt") << kUnguardedNote;
    return kOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    const auto rows = sweep_q(c.p, c.r, c.q_list, grid, c.solver, threshold_options(c), c.jobs);

    {
        auto csv = open_out(dir / "sweep.csv");
        write_sweep_csv(csv, c.p, c.r, rows);
    }
    {
        auto gp = open_out(dir / "sweep.gp");
        write_sweep_plot_script(gp, "sweep.csv", "sweep.png");
    }
    int n_ok = 0;
    bool unguarded = false;
    out << "q,|lambda_emp-lambda1|,lambda_hat-lambda_tilde\n";
    for (const auto& row : rows) {
        if (row.ok()) {
            ++n_ok;
            unguarded = unguarded || row.bracket->unguarded;
            out << num(row.q) << ',' << num(row.distance_to_lambda1()) << ',' << num(row.bound_gap()) << '\n';
        } else {
            err << "row q = " << num(row.q) << " failed: " << row.error << '\n';
        }
    }
    if (unguarded) open_out(dir / "notes.txt") << kUnguardedNote;

    if (c.refine && n_ok > 0) {
        const Grid fine = make_grid(c.a, c.b, c.refine_cells);
        const auto fine_rows =
            sweep_q(c.p, c.r, {c.q_list.back()}, fine, c.solver, threshold_options(c), 1);
        auto csv = open_out(dir / "refine.csv");
        write_sweep_csv(csv, c.p, c.r, fine_rows);
        if (fine_rows.front().ok() && rows.back().ok()) {
            out << "refine: lambda_emp(" << c.cells << ") = " << num(*rows.back().bracket->lambda_emp) << ", lambda_emp("
                << c.refine_cells << ") = " << num(*fine_rows.front().bracket->lambda_emp) << '\n';
        }
    }
    return n_ok > 0 ? kOk : kInvalid;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
    const Grid grid = make_grid(c.a, c.b, c.cells);
    const auto dir = prepare_out(c);
    echo_config(c, dir);
    const Params prm = make_params(c.p, c.q, std::max(c.r, c.p + 1.0));
    const EigenResult eig = first_eigenpair(c.p, grid, c.solver);
    bool ok = true;

    {
        auto csv = open_out(dir / "sandwich.csv");
        write_sandwich_header(csv);
        for (double f : c.lambda_fracs) {
            const SandwichReport rep = verify_supnorm_sandwich(f * eig.lambda1, prm, grid, eig, c.solver);
            write_sandwich_row(csv, rep);
            out << "sandwich lambda/lambda1 = " << num(f) << ": " << (rep.holds ? "holds" : "FAILS")
                << (rep.upper_defined ? "" : " (upper bound undefined)") << '\n';
            ok = ok && rep.holds;
        }
    }

    // c(q, λ) ≥ 1 and c^{p−q} → 1 along q ↑ p at λ = lambda-frac·λ₁.
    auto csv = open_out(dir / "c_constant.csv");
    csv << "q,lambda,c_value,c_pow_gap\n";
    const double lambda = c.lambda_frac * eig.lambda1;
    double prev_dev = std::numeric_limits<double>::infinity();
    for (double gap : {0.4, 0.2, 0.1, 0.05}) {
        const double q = c.p - gap;
        if (!(q > 1.0)) continue;
        const double cv = c_constant(make_params(c.p, q, std::max(c.r, c.p + 1.0)), lambda, grid, eig, c.solver);
        const double dev = std::abs(std::pow(cv, gap) - 1.0);
        csv << num(q) << ',' << num(lambda) << ',' << num(cv) << ',' << num(std::pow(cv, gap)) << '\n';
        const bool row_ok = cv >= 1.0 - kCTolerance && dev <= prev_dev;
        out << "c(q = " << num(q) << ") = " << num(cv) << ", c^(p-q) = " << num(std::pow(cv, gap)) << ": "
            << (row_ok ? "ok" : "FAILS") << '\n';
        ok = ok && row_ok;
        prev_dev = dev;
    }
    return ok ? kOk : kInvalid;
}

/// "1.6,1.8" or "[1.6, 1.8]" or "1.6 1.8"; an empty string gives an empty list.
inline std::vector<double> parse_list(const std::vector<std::string>& parts) {
    std::string text;
    for (const auto& part : parts) text += part + ' ';
    for (char& ch : text) {
        if (ch == ',' || ch == '[' || ch == ']' || ch == '"') ch = ' ';
    }
    std::istringstream is(text);
    std::vector<double> v;
    std::string tok;
    while (is >> tok) {
        std::size_t pos = 0;
        v.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument(tok);
    }
    return v;
}

inline bool seed_on_command_line(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string_view a(argv[i]);
        if (a == "--seed" || a.starts_with("--seed=")) return true;
    }
    return false;
}

} // namespace detail

/// Parses arguments into a RunConfig. Returns an exit code when parsing ends
/// the run (help, parse error), nothing when the command should execute.
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out,
                                std::ostream& err) {
    CLI::App app{"p-Laplacian concave-convex problem on an interval", "plap"};
    app.set_config("--config", "", "flat key=value file; keys are the long flag names");
    app.option_defaults()->always_capture_default();

    app.add_option("--a", c.a, "left endpoint");
    app.add_option("--b", c.b, "right endpoint");
    app.add_option("--cells", c.cells, "number of grid cells");
    app.add_option("--p", c.p, "operator exponent");
    app.add_option("--q", c.q, "concave exponent");
    app.add_option("--r", c.r, "convex exponent");
    app.add_option("--Lambda", c.Lambda, "coefficient of the concave term");
    app.add_option("--lambda-frac", c.lambda_frac, "lambda as a fraction of lambda1 (linear-concave, verify)");
    app.add_option("--coeff", c.coeff, "coefficient on the concave term (linear-concave)");
    std::vector<std::string> q_list_text, lambda_fracs_text;
    auto* q_list_opt =
        app.add_option("--q-list", q_list_text, "comma-separated q values (sweep)")->default_str("1.6,1.8,1.9,1.95");
    auto* fracs_opt = app.add_option("--lambda-fracs", lambda_fracs_text, "comma-separated lambda/lambda1 values (verify)")
        ->default_str("0,0.3,0.6");
    app.add_option("--jobs", c.jobs, "concurrent sweep rows");
    app.add_flag("--refine", c.refine, "rerun the last sweep row on a finer grid");
    app.add_option("--refine-cells", c.refine_cells, "cells for --refine");
    app.add_option("--max-outer", c.max_outer, "outer iteration budget");
    app.add_option("--rel-width", c.rel_width, "relative bracket width target");
    app.add_option("--max-steps", c.max_steps, "bisection step cap");
    app.add_option("--tol-residual", c.solver.tol_residual, "weak-residual tolerance, scaled by 1 + sup|rhs|");
    app.add_option("--tol-step", c.solver.tol_step, "sup-norm step tolerance");
    app.add_option("--max-inner-iters", c.solver.max_inner_iters, "Newton iteration cap per solve");
    app.add_option("--epsilon-reg", c.solver.epsilon_reg, "Hessian regularization");
    app.add_option("--blowup-cap", c.solver.blowup_cap, "sup norm that counts as divergence");
    app.add_option("--seed", c.seed, "seed for randomized starts; PLAP_SEED overrides config and default");
    app.add_flag("--random-start", c.random_start, "eigen: start from a seeded random positive vector");
    app.add_flag("--verbose,--trace", c.verbose, "write iteration traces");
    app.add_option("--out", c.out, "output directory");

    auto* eigen = app.add_subcommand("eigen", "first eigenpair");
    auto* solve = app.add_subcommand("solve", "model problems and the concave-convex problem");
    solve->add_option("kind", c.kind, "concave | linear-concave | concave-convex")
        ->required()
        ->check(CLI::IsMember({"concave", "linear-concave", "concave-convex"}));
    auto* iter = app.add_subcommand("iterate", "monotone iteration with trace and ordering diagnostics");
    auto* thr = app.add_subcommand("threshold", "closed-form bounds and empirical threshold");
    auto* sweep = app.add_subcommand("sweep", "threshold bracket for each q in q-list");
    auto* verify = app.add_subcommand("verify", "sup-norm sandwich and c-constant checks");
    for (auto* s : {eigen, solve, iter, thr, sweep, verify}) s->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: invalid-config: " << e.what() << '\n';
        return kInvalid;
    }
    c.command = app.get_subcommands().front()->get_name();
    try {
        if (q_list_opt->count() > 0) c.q_list = detail::parse_list(q_list_text);
        if (fracs_opt->count() > 0) c.lambda_fracs = detail::parse_list(lambda_fracs_text);
    } catch (const std::exception&) {
        err << "error: invalid-config: list values must be numbers separated by commas\n";
        return kInvalid;
    }

    if (!detail::seed_on_command_line(argc, argv)) {
        if (const char* env = std::getenv("PLAP_SEED")) {
            try {
                std::size_t pos = 0;
                c.seed = std::stoull(env, &pos);
                if (pos != std::string_view(env).size()) throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                err << "error: invalid-config: PLAP_SEED must be a nonnegative integer\n";
                return kInvalid;
            }
        }
    }
    return std::nullopt;
}

inline int run_config(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        detail::validate(c);
        if (c.command == "eigen") return detail::cmd_eigen(c, out);
        if (c.command == "solve") return detail::cmd_solve(c, out);
        if (c.command == "iterate") return detail::run_concave_convex(c, out, true);
        if (c.command == "threshold") return detail::cmd_threshold(c, out);
        if (c.command == "sweep") return detail::cmd_sweep(c, out, err);
        if (c.command == "verify") return detail::cmd_verify(c, out);
        err << "error: invalid-config: unknown command " << c.command << '\n';
        return kInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig c;
    if (auto code = parse(argc, argv, c, out, err)) return *code;
    return run_config(c, out, err);
}

} // namespace plap::cli
