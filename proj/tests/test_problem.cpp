#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dirichlet/problem.hpp"
#include "test_support.hpp"

namespace dirichlet {
namespace {

using testing::make_spec;

TEST(ProblemSpec, RejectsNonPositiveConstants) {
    EXPECT_THROW(make_spec("x", "1", 0.0, 0.5), SpecError);
    EXPECT_THROW(make_spec("x", "1", 0.5, -1.0), SpecError);
    EXPECT_THROW(make_spec("x", "1", NAN, 1.0), SpecError);
}

TEST(ProblemSpec, RejectsNonDifferentiableF) {
    EXPECT_THROW(make_spec("abs(x)", "1"), SpecError);
}

TEST(ProblemSpec, RejectsVDependingOnX) {
    EXPECT_THROW(make_spec("x", "x + t"), SpecError);
}

TEST(ProblemSpec, DerivesAndCrossValidatesFx) {
    const ProblemSpec spec = make_spec(corpus::f1, "1");
    EXPECT_NEAR(spec.eval_fx(0.0, 0.0), 0.25, 1e-15);
    // A wrong override is caught by the finite-difference cross-check.
    EXPECT_THROW(ProblemSpec::make(parse("sin(x)"), parse("1"), 0.1, 1.0, -1.0, parse("sin(x)")), SpecError);
    EXPECT_NO_THROW(ProblemSpec::make(parse("sin(x)"), parse("1"), 0.1, 1.0, -1.0, parse("cos(x)")));
}

TEST(ProblemSpec, EvaluationFailureCarriesLocation) {
    const ProblemSpec spec = make_spec("1/x", "1");
    try {
        spec.eval_f(0.5, 0.0);
        FAIL();
    } catch (const SampleEvalError& err) {
        EXPECT_EQ(err.t(), 0.5);
        EXPECT_EQ(err.x(), 0.0);
    }
}

TEST(CheckGrowth, FirstExampleWithinBound) {
    const ProblemSpec spec = make_spec(corpus::f1, "1", 0.1, 0.5);
    const auto report = check_growth(spec, {100.0, 51, 2001});
    EXPECT_EQ(report.verdict, Verdict::no_violation_found);
    EXPECT_TRUE(report.witnesses.empty());
    EXPECT_EQ(report.samples(), 51u * 2001u);
}

TEST(CheckGrowth, LinearFViolatesSmallSlope) {
    const ProblemSpec spec = make_spec("x", "1", 0.5, 0.1);
    const auto report = check_growth(spec, {10.0, 11, 201});
    ASSERT_EQ(report.verdict, Verdict::violated);
    ASSERT_FALSE(report.witnesses.empty());
    const auto worst = std::max_element(report.witnesses.begin(), report.witnesses.end(),
                                        [](const Witness& a, const Witness& b) { return a.lhs - a.rhs < b.lhs - b.rhs; });
    EXPECT_NEAR(std::abs(worst->x), 10.0, 1e-12);
    EXPECT_GT(worst->lhs, worst->rhs);
}

TEST(CheckGrowth, ZeroNeverViolates) {
    const ProblemSpec spec = make_spec("0", "1", 1e-3, 1e-3);
    EXPECT_EQ(check_growth(spec, {50.0, 21, 101}).verdict, Verdict::no_violation_found);
}

TEST(CheckGrowth, BoundItselfIsReflexive) {
    // f = A|x| + B attains the bound everywhere but never exceeds it.
    for (double a : {0.1, 0.5, 0.9}) {
        for (double b : {0.2, 1.0, 3.0}) {
            // abs has no symbolic derivative, so f_x is supplied explicitly.
            const std::string f = std::to_string(a) + "*abs(x) + " + std::to_string(b);
            const ProblemSpec spec = ProblemSpec::make(parse(f), parse("0"), a, b, -1.0,
                                                       parse(std::to_string(a) + "*x/abs(x)"));
            EXPECT_EQ(check_growth(spec, {20.0, 11, 401}).verdict, Verdict::no_violation_found);
        }
    }
}

TEST(CheckGrowth, SampleEvalFailureIsReported) {
    const ProblemSpec spec = make_spec("1/(x - 0.5)", "1");
    EXPECT_THROW(check_growth(spec, {1.0, 3, 5}), SampleEvalError);
    EXPECT_THROW(check_growth(spec, {-1.0, 3, 5}), std::invalid_argument);
}

TEST(CheckFxLower, SecondExampleAttainsButRespectsBound) {
    const double lower = std::exp(-std::numbers::pi) - 1.0;
    const ProblemSpec spec = make_spec(corpus::f2, "1", 0.12, 4.3, lower);
    const auto report = check_fx_lower(spec, {10.0, 201, 2001});
    EXPECT_EQ(report.verdict, Verdict::no_violation_found);
    // Slightly above the true infimum must be caught at (t, x) = (0, 0).
    const ProblemSpec tight = make_spec(corpus::f2, "1", 0.12, 4.3, lower + 1e-6);
    const auto violated = check_fx_lower(tight, {10.0, 201, 2001});
    ASSERT_EQ(violated.verdict, Verdict::violated);
    EXPECT_EQ(violated.witnesses.front().t, 0.0);
    EXPECT_NEAR(violated.witnesses.front().x, 0.0, 1e-12);
}

TEST(CheckFxLower, SteepNegativeSlopeViolatedEverywhere) {
    const ProblemSpec spec = make_spec("-2*x", "1", 2.5, 0.1, -1.0);
    const auto report = check_fx_lower(spec, {10.0, 5, 7});
    ASSERT_EQ(report.verdict, Verdict::violated);
    EXPECT_EQ(report.witnesses.size(), 35u);
    EXPECT_EQ(report.witnesses.front().lhs, -2.0);
    EXPECT_EQ(report.witnesses.front().rhs, -1.0);
}

TEST(CheckFxLower, ZeroFunction) {
    const ProblemSpec spec = make_spec("0", "1", 0.1, 0.1, -0.5);
    EXPECT_EQ(check_fx_lower(spec, {10.0, 11, 11}).verdict, Verdict::no_violation_found);
}

TEST(Classify, ThresholdExamples) {
    auto both = classify(make_spec("0", "1", 0.1, 0.5, -0.9));
    EXPECT_TRUE(both.continuous_theorem_applies);
    EXPECT_TRUE(both.discrete_theorem_applies);

    auto only_continuous = classify(make_spec("0", "1", 2.0, 0.5, -0.5));
    EXPECT_TRUE(only_continuous.continuous_theorem_applies);
    EXPECT_FALSE(only_continuous.discrete_theorem_applies);

    auto neither = classify(make_spec("0", "1", 0.5, 0.5, -20.0));
    EXPECT_FALSE(neither.continuous_theorem_applies);
    EXPECT_FALSE(neither.discrete_theorem_applies);

    // Strict inequalities at the thresholds.
    EXPECT_FALSE(classify(make_spec("0", "1", 1.0, 0.5, 0.0)).discrete_theorem_applies);
    EXPECT_FALSE(classify(make_spec("0", "1", 0.5, 0.5, -1.0)).discrete_theorem_applies);
}

TEST(Classify, DiscreteImpliesContinuous) {
    testing::Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const double a = rng.uniform(1e-3, 12.0);
        const double lower = rng.uniform(-12.0, 2.0);
        const auto c = classify(make_spec("0", "1", a, 1.0, lower));
        if (c.discrete_theorem_applies) {
            EXPECT_TRUE(c.continuous_theorem_applies);
        }
    }
}

TEST(AprioriBound, Formula) {
    EXPECT_NEAR(apriori_bound(0.1, 0.5, 1.0), 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(apriori_bound(1e-9, 1e-9, 0.0), 0.0, 1e-8);
    EXPECT_THROW(apriori_bound(1.0, 0.5, 1.0), std::domain_error);
    EXPECT_THROW(apriori_bound(make_spec("0", "1", 1.5, 0.5), 1.0), std::domain_error);
}

TEST(AprioriBound, DefaultSampleRangeIsTwiceM) {
    const ProblemSpec spec = make_spec(corpus::f1, "1", 0.1, 0.5, -0.25);
    EXPECT_NEAR(default_x_range(spec), 2.0 * 5.0 / 3.0, 1e-12);
    EXPECT_EQ(default_x_range(make_spec("0", "1", 2.0, 0.5), 7.0), 7.0);
}

}  // namespace
}  // namespace dirichlet
