#pragma once

// Problem definition for  d2x(k-1) = f(k/N, x(k))/N^2 + v(k/N)/N^2,
// x(0) = x(N) = 0, together with sampled falsifiers for the hypotheses
//
//   growth:      |f(t,x)| <= A|x| + B           on [0,1] x R
//   derivative:  f_x(t,x) >= declared lower bound
//
// and the classifier that compares the declared constants with the
// thresholds of the discrete (A < 1, inf f_x > -1) and continuous
// (A < pi^2, inf f_x > -pi^2) solvability results.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirichlet/expr.hpp"

namespace dirichlet {

/// Raised when a spec's declared constants or derivative are inconsistent.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation failure at a known sample point.
class SampleEvalError : public EvalError {
public:
    SampleEvalError(const std::string& expr_name, double t, double x, const std::string& cause)
        : EvalError(expr_name + " failed at (t=" + detail::format_number(t) +
                    ", x=" + detail::format_number(x) + "): " + cause),
          t_(t),
          x_(x) {}
    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }

private:
    double t_;
    double x_;
};

class ProblemSpec {
public:
    /// Validates the declared constants and derives f_x symbolically unless
    /// an override is given. Either way f_x is cross-checked against
    /// centered finite differences of f on [0,1] x [-2,2].
    static ProblemSpec make(Expr f, Expr v, double declared_A, double declared_B,
                            double declared_fx_lower, std::optional<Expr> fx_override = {}) {
        if (!(declared_A > 0.0) || !std::isfinite(declared_A)) {
            throw SpecError("declared A must be a positive finite number");
        }
        if (!(declared_B > 0.0) || !std::isfinite(declared_B)) {
            throw SpecError("declared B must be a positive finite number");
        }
        if (!std::isfinite(declared_fx_lower)) {
            throw SpecError("declared fx_lower must be finite");
        }
        if (depends_on(v, Var::x)) {
            throw SpecError("v must depend on t only");
        }
        Expr fx;
        if (fx_override) {
            fx = *fx_override;
        } else {
            try {
                fx = diff(f, Var::x);
            } catch (const DiffError& err) {
                throw SpecError(std::string("cannot differentiate f in x: ") + err.what());
            }
        }
        cross_validate_fx(f, fx);
        return ProblemSpec(std::move(f), std::move(fx), std::move(v), declared_A, declared_B,
                           declared_fx_lower);
    }

    const Expr& f() const noexcept { return f_; }
    const Expr& fx() const noexcept { return fx_; }
    const Expr& v() const noexcept { return v_; }
    double declared_A() const noexcept { return A_; }
    double declared_B() const noexcept { return B_; }
    double declared_fx_lower() const noexcept { return fx_lower_; }

    double eval_f(double t, double x) const { return eval_named("f", f_, t, x); }
    double eval_fx(double t, double x) const { return eval_named("f_x", fx_, t, x); }
    double eval_v(double t) const { return eval_named("v", v_, t, 0.0); }

private:
    ProblemSpec(Expr f, Expr fx, Expr v, double A, double B, double fx_lower)
        : f_(std::move(f)), fx_(std::move(fx)), v_(std::move(v)), A_(A), B_(B), fx_lower_(fx_lower) {}

    static double eval_named(const char* name, const Expr& e, double t, double x) {
        try {
            return eval(e, t, x);
        } catch (const EvalError& err) {
            throw SampleEvalError(name, t, x, err.what());
        }
    }

    // Points where f or f_x fail to evaluate are skipped: they are reported
    // later by the condition checks with their location.
    static void cross_validate_fx(const Expr& f, const Expr& fx) {
        constexpr double h = 1e-6;
        constexpr int nt = 7;
        constexpr int nx = 13;
        for (int i = 0; i < nt; ++i) {
            const double t = static_cast<double>(i) / (nt - 1);
            for (int j = 0; j < nx; ++j) {
                const double x = -2.0 + 4.0 * j / (nx - 1) + 1e-3;
                double analytic = 0.0;
                double numeric = 0.0;
                try {
                    analytic = eval(fx, t, x);
                    numeric = (eval(f, t, x + h) - eval(f, t, x - h)) / (2.0 * h);
                } catch (const EvalError&) {
                    continue;
                }
                if (std::abs(analytic - numeric) > 1e-5 * (1.0 + std::abs(analytic))) {
                    throw SpecError("f_x disagrees with finite differences of f at (t=" +
                                    detail::format_number(t) + ", x=" + detail::format_number(x) +
                                    "): " + detail::format_number(analytic) + " vs " +
                                    detail::format_number(numeric));
                }
            }
        }
    }

    Expr f_;
    Expr fx_;
    Expr v_;
    double A_;
    double B_;
    double fx_lower_;
};

// ---------------------------------------------------------------------------
// Condition checks

enum class Verdict { no_violation_found, violated };

inline const char* to_string(Verdict v) {
    return v == Verdict::violated ? "violated" : "no-violation-found";
}

struct Witness {
    double t;
    double x;
    double lhs;  ///< sampled quantity (|f| or f_x)
    double rhs;  ///< bound it was compared with
};

struct ConditionReport {
    std::string condition;  ///< "growth" or "fx_lower"
    Verdict verdict = Verdict::no_violation_found;
    std::vector<Witness> witnesses;
    std::size_t samples_t = 0;
    std::size_t samples_x = 0;
    double x_range = 0.0;

    std::size_t samples() const noexcept { return samples_t * samples_x; }
};

/// Uniform sample box [0,1] x [-x_range, x_range].
struct SampleGrid {
    double x_range = 10.0;
    std::size_t samples_t = 201;
    std::size_t samples_x = 2001;
};

namespace detail {

// Relative slack absorbing roundoff when a bound is attained exactly on
// the sample grid.
inline constexpr double check_slack = 1e-12;

template <typename Visit>
void for_each_sample(const SampleGrid& grid, Visit&& visit) {
    if (!(grid.x_range > 0.0) || !std::isfinite(grid.x_range)) {
        throw std::invalid_argument("x_range must be positive and finite");
    }
    if (grid.samples_t < 2 || grid.samples_x < 2) {
        throw std::invalid_argument("sample counts must be >= 2");
    }
    for (std::size_t i = 0; i < grid.samples_t; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid.samples_t - 1);
        for (std::size_t j = 0; j < grid.samples_x; ++j) {
            const double x = -grid.x_range + 2.0 * grid.x_range * static_cast<double>(j) /
                                                 static_cast<double>(grid.samples_x - 1);
            visit(t, x);
        }
    }
}

inline ConditionReport make_report(const char* condition, const SampleGrid& grid) {
    ConditionReport report;
    report.condition = condition;
    report.samples_t = grid.samples_t;
    report.samples_x = grid.samples_x;
    report.x_range = grid.x_range;
    return report;
}

}  // namespace detail

/// Samples |f(t,x)| <= A|x| + B. A clean verdict is evidence, not proof.
inline ConditionReport check_growth(const ProblemSpec& spec, const SampleGrid& grid = {}) {
    ConditionReport report = detail::make_report("growth", grid);
    detail::for_each_sample(grid, [&](double t, double x) {
        const double lhs = std::abs(spec.eval_f(t, x));
        const double rhs = spec.declared_A() * std::abs(x) + spec.declared_B();
        if (lhs > rhs * (1.0 + detail::check_slack)) {
            report.witnesses.push_back({t, x, lhs, rhs});
        }
    });
    if (!report.witnesses.empty()) {
        report.verdict = Verdict::violated;
    }
    return report;
}

/// Samples f_x(t,x) >= declared_fx_lower.
inline ConditionReport check_fx_lower(const ProblemSpec& spec, const SampleGrid& grid = {}) {
    ConditionReport report = detail::make_report("fx_lower", grid);
    const double lower = spec.declared_fx_lower();
    const double slack = detail::check_slack * (1.0 + std::abs(lower));
    detail::for_each_sample(grid, [&](double t, double x) {
        const double fx = spec.eval_fx(t, x);
        if (fx < lower - slack) {
            report.witnesses.push_back({t, x, fx, lower});
        }
    });
    if (!report.witnesses.empty()) {
        report.verdict = Verdict::violated;
    }
    return report;
}

struct Classification {
    bool continuous_theorem_applies = false;
    bool discrete_theorem_applies = false;
};

inline constexpr double continuous_threshold = std::numbers::pi * std::numbers::pi;
inline constexpr double discrete_threshold = 1.0;

/// Compares the declared constants with both sets of solvability thresholds.
inline Classification classify(const ProblemSpec& spec) {
    Classification c;
    c.continuous_theorem_applies = spec.declared_A() < continuous_threshold &&
                                   spec.declared_fx_lower() > -continuous_threshold;
    c.discrete_theorem_applies =
        spec.declared_A() < discrete_threshold && spec.declared_fx_lower() > -discrete_threshold;
    return c;
}

/// M = (sup|v| + B) / (1 - A): a bound on |x_N(k)| uniform in N.
inline double apriori_bound(double declared_A, double declared_B, double v_sup) {
    if (!(declared_A < 1.0)) {
        throw std::domain_error("a-priori bound needs declared A < 1");
    }
    return (v_sup + declared_B) / (1.0 - declared_A);
}

inline double apriori_bound(const ProblemSpec& spec, double v_sup) {
    return apriori_bound(spec.declared_A(), spec.declared_B(), v_sup);
}

/// max |v| over `samples` equally spaced points of [0,1].
inline double sampled_v_sup(const ProblemSpec& spec, std::size_t samples = 2001) {
    double m = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
        m = std::max(m, std::abs(spec.eval_v(t)));
    }
    return m;
}

/// max_k |v(k/N)| over the grid nodes k = 0..N.
inline double grid_v_sup(const ProblemSpec& spec, std::size_t n) {
    double m = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        m = std::max(m, std::abs(spec.eval_v(static_cast<double>(k) / static_cast<double>(n))));
    }
    return m;
}

/// Sampling half-width for the condition checks: 2M when M is defined,
/// otherwise `fallback`. Solutions lie in [-M, M], so this covers them with
/// margin.
inline double default_x_range(const ProblemSpec& spec, double fallback = 10.0) {
    if (spec.declared_A() >= 1.0) {
        return fallback;
    }
    return 2.0 * apriori_bound(spec, sampled_v_sup(spec));
}

}  // namespace dirichlet
