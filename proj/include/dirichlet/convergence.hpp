#pragma once

// Grid-refinement studies: manufactured problems with a known continuous
// solution x*, and sup-norm errors max_k |x*(k/N) - x_N(k)| as N grows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirichlet/expr.hpp"
#include "dirichlet/grid.hpp"
#include "dirichlet/problem.hpp"
#include "dirichlet/solver.hpp"

namespace dirichlet {

class ManufactureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A problem whose continuous solution is known in closed form.
struct ManufacturedProblem {
    ProblemSpec spec;
    Expr x_star;  ///< in t only; vanishes at t = 0 and t = 1
};

/// Builds v = x*'' - f(t, x*(t)) so that x* solves x'' = f(t, x) + v(t),
/// x(0) = x(1) = 0.
inline ManufacturedProblem manufacture(const Expr& f, const Expr& x_star, double declared_A,
                                       double declared_B, double declared_fx_lower) {
    if (depends_on(x_star, Var::x)) {
        throw ManufactureError("manufactured solution must depend on t only");
    }
    for (double t : {0.0, 1.0}) {
        double value = 0.0;
        try {
            value = eval(x_star, t, 0.0);
        } catch (const EvalError& err) {
            throw ManufactureError("manufactured solution fails at t=" + detail::format_number(t) +
                                   ": " + err.what());
        }
        if (std::abs(value) > 1e-12) {
            throw ManufactureError("manufactured solution must vanish at t=0 and t=1; x*(" +
                                   detail::format_number(t) + ") = " + detail::format_number(value));
        }
    }
    Expr second;
    try {
        second = diff(diff(x_star, Var::t), Var::t);
    } catch (const DiffError& err) {
        throw ManufactureError(std::string("manufactured solution is not twice differentiable: ") +
                               err.what());
    }
    Expr v = second - substitute(f, Var::x, x_star);
    return ManufacturedProblem{
        ProblemSpec::make(f, std::move(v), declared_A, declared_B, declared_fx_lower), x_star};
}

enum class ReferenceKind { manufactured, fine_grid };

inline const char* to_string(ReferenceKind k) {
    return k == ReferenceKind::manufactured ? "manufactured" : "fine-grid";
}

struct ConvergenceRow {
    std::size_t n = 0;
    double sup_error = 0.0;
    std::optional<double> empirical_order;  ///< absent for the first row
    double derivative_bound = 0.0;          ///< max_k N |dx_N(k-1)|
};

struct ConvergenceTable {
    std::string problem_id;
    ReferenceKind reference = ReferenceKind::manufactured;
    std::vector<ConvergenceRow> rows;
    /// Set when a solve failed; rows then hold the completed prefix.
    std::optional<std::string> failure;

    bool complete() const noexcept { return !failure.has_value(); }
};

/// max_k N |x(k) - x(k-1)|, the discrete analogue of sup |x'|.
inline double scaled_derivative_bound(const GridFunction& x) {
    return static_cast<double>(x.subdivisions()) * sup_abs(forward_difference(x));
}

namespace detail {

inline std::vector<std::size_t> normalized_ns(std::vector<std::size_t> ns) {
    if (ns.empty()) {
        throw std::invalid_argument("convergence study needs at least one N");
    }
    std::sort(ns.begin(), ns.end());
    if (std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
        throw std::invalid_argument("convergence study: duplicate N");
    }
    if (ns.front() < 2) {
        throw std::invalid_argument("convergence study: every N must be >= 2");
    }
    return ns;
}

// log(e_prev / e) / log(N / N_prev); log2 of the error ratio when N doubles.
inline std::optional<double> empirical_order(const ConvergenceRow& prev, const ConvergenceRow& cur) {
    if (!(prev.sup_error > 0.0) || !(cur.sup_error > 0.0)) {
        return std::nullopt;
    }
    return std::log(prev.sup_error / cur.sup_error) /
           std::log(static_cast<double>(cur.n) / static_cast<double>(prev.n));
}

template <typename ErrorFn>
ConvergenceTable study(std::string problem_id, ReferenceKind kind, const ProblemSpec& spec,
                       const std::vector<std::size_t>& ns, const SolverConfig& cfg,
                       ErrorFn&& error_of) {
    ConvergenceTable table{std::move(problem_id), kind, {}, std::nullopt};
    for (std::size_t n : ns) {
        SolverConfig run_cfg = cfg;
        run_cfg.initial_guess.reset();
        const SolveReport report = newton_solve(spec, n, run_cfg);
        if (!report.converged()) {
            table.failure = "N=" + std::to_string(n) + ": " + to_string(report.status) +
                            (report.message.empty() ? "" : " (" + report.message + ")");
            return table;
        }
        ConvergenceRow row;
        row.n = n;
        row.sup_error = error_of(report.solution);
        row.derivative_bound = scaled_derivative_bound(report.solution);
        if (!table.rows.empty()) {
            row.empirical_order = empirical_order(table.rows.back(), row);
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace detail

/// Refinement study against the exact manufactured solution.
inline ConvergenceTable run_study(const ManufacturedProblem& problem, std::vector<std::size_t> ns,
                                  const SolverConfig& cfg = {}, std::string problem_id = {}) {
    ns = detail::normalized_ns(std::move(ns));
    return detail::study(std::move(problem_id), ReferenceKind::manufactured, problem.spec, ns, cfg,
                         [&](const GridFunction& x) {
                             double err = 0.0;
                             for (std::size_t k = 0; k <= x.subdivisions(); ++k) {
                                 err = std::max(err, std::abs(eval(problem.x_star, x.t(k), 0.0) - x[k]));
                             }
                             return err;
                         });
}

/// Refinement study against a fine-grid solve with ref_factor * max(Ns)
/// subdivisions, restricted to the nodes each coarse grid shares with it.
inline ConvergenceTable run_study(const ProblemSpec& spec, std::vector<std::size_t> ns,
                                  const SolverConfig& cfg = {}, std::string problem_id = {},
                                  std::size_t ref_factor = 8) {
    ns = detail::normalized_ns(std::move(ns));
    if (ref_factor < 1) {
        throw std::invalid_argument("ref_factor must be >= 1");
    }
    const std::size_t fine_n = ref_factor * ns.back();
    for (std::size_t n : ns) {
        if (fine_n % n != 0) {
            throw std::invalid_argument("N=" + std::to_string(n) + " does not divide the reference grid " +
                                        std::to_string(fine_n));
        }
    }
    SolverConfig fine_cfg = cfg;
    fine_cfg.initial_guess.reset();
    const SolveReport fine = newton_solve(spec, fine_n, fine_cfg);
    if (!fine.converged()) {
        ConvergenceTable table{std::move(problem_id), ReferenceKind::fine_grid, {}, std::nullopt};
        table.failure = "reference N=" + std::to_string(fine_n) + ": " + to_string(fine.status);
        return table;
    }
    return detail::study(std::move(problem_id), ReferenceKind::fine_grid, spec, ns, cfg,
                         [&](const GridFunction& x) {
                             const std::size_t stride = fine_n / x.subdivisions();
                             double err = 0.0;
                             for (std::size_t k = 0; k <= x.subdivisions(); ++k) {
                                 err = std::max(err, std::abs(fine.solution[k * stride] - x[k]));
                             }
                             return err;
                         });
}

/// Largest derivative_bound over the table's rows.
inline double derivative_bound_check(const ConvergenceTable& table) {
    if (table.rows.empty()) {
        throw std::invalid_argument("derivative_bound_check: empty table");
    }
    double m = 0.0;
    for (const auto& row : table.rows) {
        m = std::max(m, row.derivative_bound);
    }
    return m;
}

}  // namespace dirichlet
