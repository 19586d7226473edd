#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dirichlet/config.hpp"
#include "dirichlet/convergence.hpp"
#include "test_support.hpp"

namespace dirichlet {
namespace {

constexpr double pi = std::numbers::pi;

ManufacturedProblem corpus_manufactured(const char* name) {
    ConfiguredProblem p = build_problem(corpus::get(name));
    return ManufacturedProblem{p.spec, *p.x_star};
}

TEST(Manufacture, QuadraticWithZeroF) {
    const auto p = manufacture(parse("0"), parse("t^2 - t"), 0.01, 0.01, -0.5);
    for (double t : {0.0, 0.3, 0.77, 1.0}) EXPECT_NEAR(p.spec.eval_v(t), 2.0, 1e-15);
}

TEST(Manufacture, LinearFWithSine) {
    const auto p = manufacture(parse("x"), parse("sin(pi*t)"), 1.5, 0.1, 1.0);
    for (double t : {0.1, 0.25, 0.5, 0.9}) {
        const double s = std::sin(pi * t);
        EXPECT_NEAR(p.spec.eval_v(t), -pi * pi * s - s, 1e-12);
    }
}

TEST(Manufacture, RejectsBadSolutions) {
    EXPECT_THROW(manufacture(parse("x"), parse("t"), 0.5, 0.5, -0.5), ManufactureError);
    EXPECT_THROW(manufacture(parse("x"), parse("x*t"), 0.5, 0.5, -0.5), ManufactureError);
    EXPECT_THROW(manufacture(parse("x"), parse("abs(t - 0.5) - 0.5"), 0.5, 0.5, -0.5), ManufactureError);
}

TEST(Manufacture, ExactSolutionSatisfiesOde) {
    // x*'' - f(t, x*) - v must vanish for every corpus entry.
    for (const char* name : {"f1_sin", "f2_sin", "f3_sin"}) {
        const auto p = corpus_manufactured(name);
        const Expr xpp = diff(diff(p.x_star, Var::t), Var::t);
        for (int i = 0; i <= 20; ++i) {
            const double t = i / 20.0;
            const double xs = eval(p.x_star, t, 0.0);
            EXPECT_NEAR(eval(xpp, t, 0.0) - p.spec.eval_f(t, xs) - p.spec.eval_v(t), 0.0, 1e-12) << name;
        }
    }
}

TEST(RunStudy, QuadraticIsExactOnEveryGrid) {
    // Second differences are exact on quadratics.
    const auto p = manufacture(parse("0"), parse("t^2 - t"), 0.01, 0.01, -0.5);
    const auto table = run_study(p, {4, 8, 16, 32}, {}, "quadratic");
    ASSERT_TRUE(table.complete());
    ASSERT_EQ(table.rows.size(), 4u);
    for (const auto& row : table.rows) EXPECT_LE(row.sup_error, 1e-13);
    EXPECT_LE(derivative_bound_check(table), 1.0 + 1e-12);
}

TEST(RunStudy, ZeroProblemHasZeroError) {
    const auto table = run_study(corpus_manufactured("zero"), {8, 16}, {}, "zero");
    ASSERT_TRUE(table.complete());
    for (const auto& row : table.rows) {
        EXPECT_EQ(row.sup_error, 0.0);
        EXPECT_EQ(row.derivative_bound, 0.0);
    }
    EXPECT_FALSE(table.rows[1].empirical_order.has_value());
}

TEST(RunStudy, SecondOrderOnSmoothManufacturedProblems) {
    for (const char* name : {"f1_sin", "f2_sin", "f3_sin"}) {
        const auto table = run_study(corpus_manufactured(name), {128, 8, 16, 32, 64}, {}, name);
        ASSERT_TRUE(table.complete()) << *table.failure;
        ASSERT_EQ(table.rows.front().n, 8u);
        EXPECT_FALSE(table.rows.front().empirical_order.has_value());
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            EXPECT_LT(table.rows[i].sup_error, table.rows[i - 1].sup_error) << name;
            ASSERT_TRUE(table.rows[i].empirical_order.has_value());
            EXPECT_NEAR(*table.rows[i].empirical_order, 2.0, 0.1) << name << " N=" << table.rows[i].n;
        }
        EXPECT_LE(table.rows.back().sup_error, 1e-3) << name;
    }
}

TEST(RunStudy, DerivativeBoundStaysNearContinuousSlope) {
    // sup |x*'| = pi for sin(pi t); the discrete bound approaches it from below.
    for (const char* name : {"f1_sin", "f2_sin", "f3_sin"}) {
        const auto table = run_study(corpus_manufactured(name), {8, 32, 128}, {}, name);
        ASSERT_TRUE(table.complete());
        for (const auto& row : table.rows) {
            EXPECT_LE(row.derivative_bound, pi + 1e-9) << name;
            EXPECT_GE(row.derivative_bound, pi / 10.0) << name;
        }
        EXPECT_NEAR(table.rows.back().derivative_bound, pi, 1e-3) << name;
    }
}

TEST(RunStudy, FineGridReferenceForPlainProblems) {
    for (const char* name : {"f1", "f2", "f3"}) {
        const ProblemSpec spec = testing::corpus_spec(name);
        const auto table = run_study(spec, {8, 16, 32, 64}, {}, name);
        ASSERT_TRUE(table.complete()) << name;
        EXPECT_EQ(table.reference, ReferenceKind::fine_grid);
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            EXPECT_LT(table.rows[i].sup_error, table.rows[i - 1].sup_error) << name;
            EXPECT_NEAR(*table.rows[i].empirical_order, 2.0, 0.2) << name;
        }
        const double ratio = derivative_bound_check(table) / table.rows.front().derivative_bound;
        EXPECT_LE(ratio, 10.0) << name;
    }
}

TEST(RunStudy, InputValidation) {
    const ProblemSpec spec = testing::corpus_spec("f1");
    EXPECT_THROW(run_study(spec, {}), std::invalid_argument);
    EXPECT_THROW(run_study(spec, {8, 8}), std::invalid_argument);
    EXPECT_THROW(run_study(spec, {1, 8}), std::invalid_argument);
    EXPECT_THROW(run_study(spec, {6, 8}, {}, "", 1), std::invalid_argument);
    EXPECT_NO_THROW(run_study(spec, {6, 8}, {}, "", 3));
    EXPECT_THROW(derivative_bound_check(ConvergenceTable{}), std::invalid_argument);
}

TEST(RunStudy, SolverFailureGivesPartialTable) {
    // The Jacobian diagonal vanishes exactly at N = 20 only.
    const auto p = manufacture(parse("-800*x"), parse("sin(pi*t)"), 900, 0.1, -800);
    const auto table = run_study(p, {10, 20, 40}, {}, "singular");
    EXPECT_FALSE(table.complete());
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.rows.front().n, 10u);
    EXPECT_NE(table.failure->find("N=20"), std::string::npos);
}

TEST(RunStudy, Deterministic) {
    const auto p = corpus_manufactured("f2_sin");
    const auto a = run_study(p, {8, 16, 32});
    const auto b = run_study(p, {8, 16, 32});
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].sup_error, b.rows[i].sup_error);
        EXPECT_EQ(a.rows[i].derivative_bound, b.rows[i].derivative_bound);
    }
}

}  // namespace
}  // namespace dirichlet
