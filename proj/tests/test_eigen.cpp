#include "plap/eigen.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace plap;

namespace {

GridFunction random_positive(const Grid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    GridFunction f(g);
    for (std::size_t i = 1; i + 1 < f.size(); ++i) f.set(i, u(rng) * std::sin(M_PI * (g.node(i) - g.a()) / g.length()));
    return f;
}

} // namespace

TEST(EigenOracle, QuadratureMatchesClosedForm) {
    // Independent check of the oracle itself.
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
        const double closed = (p - 1.0) * std::pow(2.0 * M_PI / (p * std::sin(M_PI / p)), p);
        EXPECT_NEAR(oracle::lambda1_quadrature(p), closed, 1e-8 * closed) << "p = " << p;
    }
    EXPECT_NEAR(oracle::lambda1_quadrature(2.0), M_PI * M_PI, 1e-9);
}

TEST(FirstEigenpair, LinearCaseApproachesPiSquared) {
    const Grid g(0.0, 1.0, 512);
    const auto eig = first_eigenpair(2.0, g);
    EXPECT_TRUE(eig.converged);
    EXPECT_NEAR(eig.lambda1, M_PI * M_PI, 1e-4 * M_PI * M_PI);
    // Discrete eigenvalue of the lumped scheme: (4/h²) sin²(πh/2).
    const double h = g.h();
    EXPECT_NEAR(eig.lambda1, 4.0 / (h * h) * std::pow(std::sin(M_PI * h / 2.0), 2), 1e-8);
    // eigenfunction ∝ sin(πx)
    const auto s = GridFunction::interpolate(g, [](double x) { return std::sin(M_PI * x); });
    const auto ratio = eig.eigenfunction[256] / s[256];
    EXPECT_LE(sup_norm(eig.eigenfunction - ratio * s), 1e-7);
}

TEST(FirstEigenpair, MatchesQuadratureOracle) {
    for (double p : {1.5, 3.0, 4.0}) {
        const auto eig = first_eigenpair(p, Grid(0.0, 1.0, 1024));
        const double ref = oracle::lambda1_quadrature(p);
        EXPECT_NEAR(eig.lambda1, ref, 1e-3 * ref) << "p = " << p;
    }
}

TEST(FirstEigenpair, DomainScaling) {
    const auto unit = first_eigenpair(2.0, Grid(0.0, 1.0, 256));
    const auto wide = first_eigenpair(2.0, Grid(0.0, 2.0, 256));
    EXPECT_NEAR(wide.lambda1, unit.lambda1 / 4.0, 1e-9 * unit.lambda1);
    // Same cell count on a longer interval: exact discrete scaling L^{-p}.
    for (double p : {1.5, 3.0}) {
        const auto a = first_eigenpair(p, Grid(0.0, 1.0, 128));
        const auto b = first_eigenpair(p, Grid(-1.0, 2.0, 128));
        EXPECT_NEAR(b.lambda1, a.lambda1 * std::pow(3.0, -p), 1e-7 * a.lambda1);
    }
}

TEST(FirstEigenpair, ResultInvariants) {
    for (double p : {1.5, 2.0, 3.0}) {
        const auto eig = first_eigenpair(p, Grid(0.0, 1.0, 200));
        EXPECT_GT(eig.lambda1, 0.0);
        EXPECT_GT(eig.eigenfunction.interior_min(), 0.0);
        EXPECT_NEAR(lp_norm(eig.eigenfunction, p), 1.0, 1e-12);
        EXPECT_NEAR(rayleigh_quotient(eig.eigenfunction, p), eig.lambda1, 1e-12 * eig.lambda1);
        ASSERT_EQ(eig.rayleigh_history.size(), static_cast<std::size_t>(eig.iterations) + 1);
        for (std::size_t k = 1; k < eig.rayleigh_history.size(); ++k) {
            EXPECT_LE(eig.rayleigh_history[k], eig.rayleigh_history[k - 1] * (1.0 + 1e-13));
        }
    }
}

TEST(FirstEigenpair, GridRefinementHalvesTheError) {
    for (double p : {1.5, 2.0, 3.0}) {
        double prev_diff = 0.0;
        double prev = first_eigenpair(p, Grid(0.0, 1.0, 64)).lambda1;
        for (int n : {128, 256, 512}) {
            const double cur = first_eigenpair(p, Grid(0.0, 1.0, n)).lambda1;
            const double diff = std::abs(cur - prev);
            if (prev_diff > 0.0) EXPECT_LE(diff, prev_diff / 2.0) << "p = " << p << " n = " << n;
            prev_diff = diff;
            prev = cur;
        }
    }
}

TEST(FirstEigenpair, StartIndependence) {
    std::mt19937 rng(4);
    const Grid g(0.0, 1.0, 256);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto s1 = random_positive(g, rng);
        const auto s2 = random_positive(g, rng);
        const auto e1 = first_eigenpair(p, g, {}, &s1);
        const auto e2 = first_eigenpair(p, g, {}, &s2);
        const double c = e1.eigenfunction[128] / e2.eigenfunction[128];
        EXPECT_LE(sup_norm(e1.eigenfunction - c * e2.eigenfunction), 1e-6 * sup_norm(e1.eigenfunction));
        EXPECT_NEAR(e1.lambda1, e2.lambda1, 1e-9 * e1.lambda1);
    }
}

TEST(FirstEigenpair, Errors) {
    const Grid g(0.0, 1.0, 32);
    EXPECT_THROW(first_eigenpair(1.0, g), Error);
    GridFunction bad(g);
    bad.set(3, -1.0);
    try {
        first_eigenpair(2.0, g, {}, &bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_positive);
    }
    EigenOptions opts;
    opts.max_iters = 1;
    try {
        first_eigenpair(3.0, Grid(0.0, 1.0, 256), {}, nullptr, opts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::solver_failure);
        EXPECT_NE(std::string(e.what()).find("max_iters"), std::string::npos);
    }
}

TEST(RayleighQuotient, MinimalAtTheEigenfunction) {
    std::mt19937 rng(8);
    std::normal_distribution<double> n01(0.0, 1.0);
    const Grid g(0.0, 1.0, 128);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto eig = first_eigenpair(p, g);
        for (int trial = 0; trial < 50; ++trial) {
            GridFunction u = eig.eigenfunction;
            const double amp = trial < 25 ? 1e-3 : 0.3;
            for (std::size_t i = 1; i + 1 < u.size(); ++i) u.set(i, u[i] + amp * n01(rng));
            EXPECT_GE(rayleigh_quotient(u, p), eig.lambda1 * (1.0 - 1e-10));
        }
    }
}

TEST(RayleighQuotient, ZeroHomogeneousAndZeroFunction) {
    const Grid g(0.0, 1.0, 32);
    const auto b = positive_bubble(g, 2.5);
    for (double c : {-3.0, 0.01, 7.0}) EXPECT_NEAR(rayleigh_quotient(c * b, 2.5), rayleigh_quotient(b, 2.5), 1e-11);
    try {
        rayleigh_quotient(GridFunction(g), 2.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::zero_function);
    }
}

TEST(CheckSupersolution, EigenfunctionExamples) {
    for (double p : {1.5, 2.0, 3.0}) {
        const auto eig = first_eigenpair(p, Grid(0.0, 1.0, 256));
        const auto below = check_supersolution(eig.eigenfunction, 0.99 * eig.lambda1, p);
        EXPECT_TRUE(below.holds);
        EXPECT_GT(below.margin, 0.0);
        const auto above = check_supersolution(eig.eigenfunction, 1.01 * eig.lambda1, p);
        EXPECT_FALSE(above.holds);
        EXPECT_LT(above.margin, 0.0);
        EXPECT_GE(above.worst_node, 1u);
        EXPECT_LE(above.worst_node, 255u);
    }
}

TEST(CheckSupersolution, RejectsNonPositive) {
    const Grid g(0.0, 1.0, 16);
    auto v = positive_bubble(g, 2.0);
    v.set(5, 0.0);
    try {
        check_supersolution(v, 1.0, 2.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_positive);
    }
}

TEST(CertifiedLambdaBracket, BracketsTheEigenvalue) {
    for (double p : {1.5, 2.0, 3.0}) {
        const auto eig = first_eigenpair(p, Grid(0.0, 1.0, 256));
        const double tol = 1e-6;
        const auto br = certified_lambda_bracket(eig.eigenfunction, p, 0.5 * eig.lambda1, 2.0 * eig.lambda1, tol);
        EXPECT_LE(br.hi - br.lo, 2.0 * tol);
        // Slack from the residual tolerance in the certificate.
        EXPECT_NEAR(0.5 * (br.lo + br.hi), eig.lambda1, 4.0 * tol);
        EXPECT_THROW(certified_lambda_bracket(eig.eigenfunction, p, 2.0 * eig.lambda1, 3.0 * eig.lambda1, tol),
                     Error);
    }
}
