#include "plap/core.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace plap;

namespace {

GridFunction constant_rhs(const Grid& g, double c) {
    return GridFunction::interpolate(g, [c](double) { return c; });
}

GridFunction random_function(const Grid& g, std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    GridFunction f(g);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) f.set(i, u(rng));
    return f;
}

} // namespace

TEST(Energy, Examples) {
    const Grid g(0.0, 1.0, 16);
    EXPECT_EQ(energy(GridFunction(g), 3.0, constant_rhs(g, 2.0)), 0.0);
    const auto hat = GridFunction::interpolate(g, [](double x) { return 1.0 - std::abs(2.0 * x - 1.0); });
    EXPECT_NEAR(energy(hat, 2.0, GridFunction(g)), 2.0, 1e-13);
}

TEST(Energy, GridMismatch) {
    try {
        energy(GridFunction(Grid(0.0, 1.0, 8)), 2.0, GridFunction(Grid(0.0, 1.0, 9)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::grid_mismatch);
    }
}

TEST(WeakResidual, ZeroFunctionAgainstUnitLoad) {
    const Grid g(0.0, 1.0, 10);
    const auto r = weak_residual(GridFunction(g), 2.5, constant_rhs(g, 1.0));
    EXPECT_EQ(r[0], 0.0);
    EXPECT_EQ(r[10], 0.0);
    for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(r[i], -g.h(), 1e-15);
}

TEST(WeakResidual, LinearAtPTwo) {
    std::mt19937 rng(3);
    const Grid g(0.0, 1.0, 40);
    const auto u = random_function(g, rng, -1.0, 1.0);
    const auto f = random_function(g, rng, -1.0, 1.0);
    const double c = 2.7;
    const auto lhs = weak_residual(c * u, 2.0, c * f);
    const auto rhs = weak_residual(u, 2.0, f);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(lhs[i], c * rhs[i], 1e-12);
}

TEST(WeakResidual, IsTheEnergyGradient) {
    // Central differences of energy(·) against the analytic gradient. Nodal
    // amplitudes of 0.05 keep cell slopes O(1) so the energy stays O(1).
    std::mt19937 rng(11);
    for (double p : {1.3, 2.0, 3.5, 7.0}) {
        const Grid g(0.0, 1.0, 24);
        for (int trial = 0; trial < 5; ++trial) {
            const auto u = random_function(g, rng, -0.02, 0.05);
            const auto f = random_function(g, rng, -1.0, 1.0);
            const auto r = weak_residual(u, p, f);
            const double floor = 1e-3 * sup_norm(r);
            for (std::size_t i = 1; i + 1 < u.size(); ++i) {
                const double step = 1e-7;
                GridFunction up = u, um = u;
                up.set(i, u[i] + step);
                um.set(i, u[i] - step);
                const double fd = (energy(up, p, f) - energy(um, p, f)) / (2.0 * step);
                EXPECT_LE(std::abs(fd - r[i]), 1e-5 * std::max(floor, std::abs(r[i]))) << "p = " << p << " i = " << i;
            }
        }
    }
}

TEST(SolvePPoisson, LinearCaseIsNodallyExact) {
    for (int n : {8, 64, 512}) {
        const Grid g(0.0, 1.0, n);
        const auto [u, rep] = solve_p_poisson(constant_rhs(g, 1.0), 2.0);
        EXPECT_EQ(rep.status, SolveStatus::converged);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double x = g.node(i);
            EXPECT_NEAR(u[i], x * (1.0 - x) / 2.0, 1e-13);
        }
        if (n % 2 == 0) EXPECT_NEAR(rep.sup_norm, 0.125, 1e-13);
    }
}

TEST(SolvePPoisson, PThreeAgainstOdeQuadrature) {
    const double target = oracle::unit_rhs_sup(3.0);
    EXPECT_NEAR(target, 2.0 / 3.0 * std::pow(0.5, 1.5), 1e-9);
    double prev = 1.0;
    for (int n : {64, 256, 1024}) {
        const auto [u, rep] = solve_p_poisson(constant_rhs(Grid(0.0, 1.0, n), 1.0), 3.0);
        ASSERT_EQ(rep.status, SolveStatus::converged);
        const double err = std::abs(rep.sup_norm - target);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(SolvePPoisson, GeneralPAgainstOdeQuadrature) {
    for (double p : {1.5, 1.8, 2.5, 4.0, 6.0, 10.0}) {
        const auto [u, rep] = solve_p_poisson(constant_rhs(Grid(0.0, 1.0, 1024), 1.0), p);
        EXPECT_EQ(rep.status, SolveStatus::converged) << "p = " << p;
        EXPECT_NEAR(rep.sup_norm, oracle::unit_rhs_sup(p), 1e-4) << "p = " << p;
    }
}

TEST(SolvePPoisson, ZeroRhsGivesZero) {
    for (double p : {1.5, 2.0, 4.0}) {
        const auto [u, rep] = solve_p_poisson(GridFunction(Grid(0.0, 1.0, 32)), p);
        EXPECT_EQ(rep.status, SolveStatus::converged);
        EXPECT_EQ(sup_norm(u), 0.0);
    }
}

TEST(SolvePPoisson, ConvergedMeansResidualBelowTolerance) {
    std::mt19937 rng(5);
    const SolverConfig cfg;
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        const Grid g(0.0, 1.0, 200);
        const auto f = random_function(g, rng, -2.0, 3.0);
        const auto [u, rep] = solve_p_poisson(f, p, cfg);
        ASSERT_EQ(rep.status, SolveStatus::converged) << "p = " << p;
        const double res = sup_norm(weak_residual(u, p, f));
        EXPECT_NEAR(res, rep.final_residual, 1e-15);
        EXPECT_LE(res, cfg.tol_residual * (1.0 + sup_norm(f)));
        EXPECT_NEAR(rep.final_energy, energy(u, p, f), 1e-12 * (1.0 + std::abs(rep.final_energy)));
    }
}

TEST(SolvePPoisson, EnergyNeverIncreases) {
    // Start far from the minimizer so the run takes several steps.
    std::mt19937 rng(9);
    for (double p : {1.5, 3.0, 6.0}) {
        const Grid g(0.0, 1.0, 128);
        const auto f = random_function(g, rng, 0.0, 1.0);
        const auto start = random_function(g, rng, -1.0, 1.0);
        const auto [u, rep] = solve_p_poisson(f, p, {}, &start);
        ASSERT_GE(rep.energy_history.size(), 2u);
        for (std::size_t k = 1; k < rep.energy_history.size(); ++k) {
            EXPECT_LE(rep.energy_history[k],
                      rep.energy_history[k - 1] + 1e-13 * std::abs(rep.energy_history[k - 1]));
        }
    }
}

TEST(SolvePPoisson, DiscreteComparisonPrinciple) {
    std::mt19937 rng(21);
    const SolverConfig cfg;
    for (double p : {1.5, 2.0, 3.0, 4.5}) {
        const Grid g(0.0, 1.0, 128);
        for (int trial = 0; trial < 4; ++trial) {
            const auto f1 = random_function(g, rng, 0.0, 1.0);
            const auto f2 = f1 + random_function(g, rng, 0.0, 0.5);
            const auto u1 = solve_p_poisson(f1, p).u;
            const auto u2 = solve_p_poisson(f2, p).u;
            for (std::size_t i = 0; i < u1.size(); ++i) EXPECT_LE(u1[i], u2[i] + cfg.tol_step);
        }
    }
}

TEST(SolvePPoisson, PositiveLoadGivesPositiveSolution) {
    std::mt19937 rng(13);
    for (double p : {1.5, 2.0, 3.0, 8.0}) {
        const Grid g(0.0, 1.0, 100);
        GridFunction f(g);
        f.set(1 + rng() % 98, 1.0);  // a single positive node
        EXPECT_GT(solve_p_poisson(f, p).u.interior_min(), 0.0) << "p = " << p;
        EXPECT_GT(solve_p_poisson(random_function(g, rng, 0.0, 1.0), p).u.interior_min(), 0.0);
    }
}

TEST(SolvePPoisson, AgreesWithTridiagonalSolveAtPTwo) {
    std::mt19937 rng(17);
    const Grid g(-1.0, 2.0, 300);
    const auto f = random_function(g, rng, -1.0, 1.0);
    const auto start = random_function(g, rng, -1.0, 1.0);
    const auto [u, rep] = solve_p_poisson(f, 2.0, {}, &start);
    const auto direct = solve_linear_poisson(f);
    EXPECT_EQ(rep.status, SolveStatus::converged);
    EXPECT_LE(sup_norm(weak_residual(direct, 2.0, f)), 1e-12);
    EXPECT_LE(sup_norm(u - direct), 1e-9);
}

TEST(SolvePPoisson, Errors) {
    const Grid g(0.0, 1.0, 16);
    auto f = constant_rhs(g, 1.0);
    EXPECT_THROW(solve_p_poisson(f, 1.05), Error);
    EXPECT_THROW(solve_p_poisson(f, 10.5), Error);
    f.set(4, INFINITY);
    try {
        solve_p_poisson(f, 2.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::non_finite_input);
        EXPECT_NE(std::string(e.what()).find("non-finite-rhs"), std::string::npos);
    }
    SolverConfig bad;
    bad.tol_step = 0.0;
    EXPECT_THROW(solve_p_poisson(constant_rhs(g, 1.0), 2.0, bad), Error);
    bad = {};
    bad.blowup_cap = 1.0;
    EXPECT_THROW(bad.validate(), Error);
    bad = {};
    bad.max_inner_iters = 0;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(SolvePPoisson, IterationCapReportsBestIterate) {
    const Grid g(0.0, 1.0, 256);
    SolverConfig cfg;
    cfg.max_inner_iters = 1;
    std::mt19937 rng(2);
    const auto start = random_function(g, rng, -1.0, 1.0);
    const auto f = constant_rhs(g, 1.0);
    const auto [u, rep] = solve_p_poisson(f, 4.0, cfg, &start);
    EXPECT_EQ(rep.status, SolveStatus::max_iters);
    EXPECT_LE(rep.iterations, 1);
    EXPECT_LE(rep.final_energy, energy(start, 4.0, f));
}

TEST(SolveReport, JsonHasTheFiveFields) {
    const auto [u, rep] = solve_p_poisson(constant_rhs(Grid(0.0, 1.0, 16), 1.0), 2.0);
    const auto j = to_json(rep);
    ASSERT_EQ(j.size(), 5u);
    EXPECT_EQ(j["status"], "converged");
    EXPECT_TRUE(j.contains("iterations"));
    EXPECT_TRUE(j.contains("final_residual"));
    EXPECT_TRUE(j.contains("final_energy"));
    EXPECT_DOUBLE_EQ(j["sup_norm"].get<double>(), rep.sup_norm);
}

TEST(FluxTransformedGuess, SolvesTheDiscreteProblemUpToRoundoff) {
    std::mt19937 rng(31);
    for (double p : {1.5, 3.0, 6.0}) {
        const Grid g(0.0, 1.0, 256);
        const auto f = random_function(g, rng, -1.0, 2.0);
        const auto u = flux_transformed_guess(f, p);
        EXPECT_LE(sup_norm(weak_residual(u, p, f)), 1e-9) << "p = " << p;
    }
}
