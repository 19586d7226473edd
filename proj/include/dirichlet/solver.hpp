#pragma once

// Damped Newton iteration for D_N x = v/N^2 with Armijo backtracking on the
// merit 1/2 |r(x)|^2, plus a multi-start uniqueness probe.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirichlet/discrete_op.hpp"
#include "dirichlet/grid.hpp"
#include "dirichlet/problem.hpp"

namespace dirichlet {

enum class SolveStatus { converged, max_iter, singular_jacobian, eval_error, line_search_failed };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::singular_jacobian: return "singular_jacobian";
        case SolveStatus::eval_error: return "eval_error";
        case SolveStatus::line_search_failed: return "line_search_failed";
    }
    return "?";
}

struct SolverConfig {
    double tol = 1e-10;
    std::size_t max_iter = 100;
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    double min_step = 1e-14;
    std::optional<GridFunction> initial_guess;  ///< zero when absent

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
        if (max_iter == 0) throw std::invalid_argument("solver max_iter must be positive");
        if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
            throw std::invalid_argument("armijo_c must lie in (0, 1)");
        }
        if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
            throw std::invalid_argument("backtrack_factor must lie in (0, 1)");
        }
        if (!(min_step > 0.0 && min_step <= 1.0)) {
            throw std::invalid_argument("min_step must lie in (0, 1]");
        }
    }
};

struct StepRecord {
    std::size_t iteration;
    double residual_norm;  ///< before the step
    double step_length;    ///< accepted damping factor
};

struct SolveReport {
    GridFunction solution;
    double residual_norm = 0.0;
    double tolerance = 0.0;  ///< effective (scaled) stopping threshold
    std::size_t iterations = 0;
    std::vector<StepRecord> step_trace;
    SolveStatus status = SolveStatus::max_iter;
    std::string message;

    bool converged() const noexcept { return status == SolveStatus::converged; }
};

/// 1/2 |r(x)|^2 with r the residual over interior nodes.
inline double merit(const ProblemSpec& spec, const GridFunction& x) {
    const double r = residual(spec, x).norm;
    return 0.5 * r * r;
}

/// Gradient of merit over interior values: J^T r.
inline std::vector<double> merit_gradient(const ProblemSpec& spec, const GridFunction& x) {
    const Residual r = residual(spec, x);
    return jacobian(spec, x).transposed().multiply(r.vector);
}

/// Stopping threshold tol * (1 + sup_k |v(k/N)| sqrt(N) / N^2). Residual
/// entries scale like 1/N^2, so an unscaled test would tighten as N grows.
inline double effective_tolerance(const ProblemSpec& spec, std::size_t n, double tol) {
    const double nn = static_cast<double>(n);
    return tol * (1.0 + grid_v_sup(spec, n) * std::sqrt(nn) / (nn * nn));
}

inline SolveReport newton_solve(const ProblemSpec& spec, std::size_t n, const SolverConfig& cfg = {}) {
    cfg.validate();
    SolveReport report{cfg.initial_guess ? *cfg.initial_guess : GridFunction::zeros(n), 0.0, 0.0, 0, {}, SolveStatus::max_iter, {}};
    if (report.solution.subdivisions() != n) {
        throw std::invalid_argument("initial guess has the wrong subdivision count");
    }

    try {
        report.tolerance = effective_tolerance(spec, n, cfg.tol);
        GridFunction& x = report.solution;
        Residual r = residual(spec, x);
        report.residual_norm = r.norm;

        for (std::size_t iter = 0;; ++iter) {
            if (r.norm <= report.tolerance) {
                report.status = SolveStatus::converged;
                return report;
            }
            if (iter == cfg.max_iter) {
                report.status = SolveStatus::max_iter;
                report.message = "no convergence within " + std::to_string(cfg.max_iter) + " iterations";
                return report;
            }

            std::vector<double> rhs(r.vector.size());
            for (std::size_t i = 0; i < rhs.size(); ++i) {
                rhs[i] = -r.vector[i];
            }
            const std::vector<double> step = solve_tridiagonal(jacobian(spec, x), rhs);

            // Along the Newton direction, grad(merit) . step = -|r|^2, so the
            // Armijo condition reads merit(x + a*step) <= (1 - 2 c a) merit(x).
            const double current = 0.5 * r.norm * r.norm;
            double alpha = 1.0;
            std::optional<GridFunction> accepted;
            Residual trial_r;
            while (alpha >= cfg.min_step) {
                try {
                    GridFunction trial = x.axpy(alpha, step);
                    trial_r = residual(spec, trial);
                    const double trial_merit = 0.5 * trial_r.norm * trial_r.norm;
                    if (trial_merit <= (1.0 - 2.0 * cfg.armijo_c * alpha) * current) {
                        accepted = std::move(trial);
                        break;
                    }
                } catch (const EvalError&) {
                    // Trial point left the domain of f; shorten the step.
                } catch (const std::invalid_argument&) {
                    // Non-finite trial values.
                }
                alpha *= cfg.backtrack_factor;
            }
            if (!accepted) {
                report.status = SolveStatus::line_search_failed;
                report.message = "Armijo backtracking fell below min_step";
                return report;
            }

            report.step_trace.push_back({iter, r.norm, alpha});
            report.iterations = iter + 1;
            x = std::move(*accepted);
            r = std::move(trial_r);
            report.residual_norm = r.norm;
        }
    } catch (const SingularMatrixError& err) {
        report.status = SolveStatus::singular_jacobian;
        report.message = err.what();
    } catch (const EvalError& err) {
        report.status = SolveStatus::eval_error;
        report.message = err.what();
    }
    return report;
}

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne Twister,
/// built from the raw bit stream so the sequence is identical on every
/// standard library.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

/// Raised when a multi-start run does not converge.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(std::size_t start, const SolveReport& report)
        : std::runtime_error("start " + std::to_string(start) + ": " + to_string(report.status) +
                             (report.message.empty() ? "" : " (" + report.message + ")")),
          start_(start),
          status_(report.status) {}
    std::size_t start() const noexcept { return start_; }
    SolveStatus status() const noexcept { return status_; }

private:
    std::size_t start_;
    SolveStatus status_;
};

struct UniquenessReport {
    double max_distance = 0.0;  ///< max pairwise sup-norm distance
    std::uint64_t seed = 0;
    std::vector<SolveReport> runs;
};

/// Solves from `starts` random initial guesses with interior values uniform
/// in [-amplitude, amplitude] and measures how far the solutions spread.
inline UniquenessReport multi_start_uniqueness(const ProblemSpec& spec, std::size_t n,
                                               const SolverConfig& cfg, std::size_t starts,
                                               double amplitude, std::uint64_t seed) {
    if (starts < 2) {
        throw std::invalid_argument("multi_start_uniqueness needs at least 2 starts");
    }
    UniquenessReport out;
    out.seed = seed;
    SeededUniform rng(seed);
    for (std::size_t s = 0; s < starts; ++s) {
        std::vector<double> guess(n - 1);
        for (double& g : guess) {
            g = rng.next(-amplitude, amplitude);
        }
        SolverConfig run_cfg = cfg;
        run_cfg.initial_guess = GridFunction::from_interior(guess);
        SolveReport report = newton_solve(spec, n, run_cfg);
        if (!report.converged()) {
            throw SolverFailure(s, report);
        }
        out.runs.push_back(std::move(report));
    }
    for (std::size_t i = 0; i < out.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < out.runs.size(); ++j) {
            out.max_distance = std::max(
                out.max_distance, sup_distance(out.runs[i].solution, out.runs[j].solution));
        }
    }
    return out;
}

}  // namespace dirichlet
