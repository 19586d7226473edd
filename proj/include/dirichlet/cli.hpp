#pragma once

// Command implementations behind the dirichlet CLI. Each command writes its
// primary product (CSV or report) to `product` and a human-readable summary
// to `summary`, and returns the process exit status:
//
//   0  success
//   1  a hypothesis check found a violation
//   2  the solver failed
//   3  usage or configuration error (raised by the caller's error handling)

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dirichlet/config.hpp"
#include "dirichlet/convergence.hpp"
#include "dirichlet/grid.hpp"
#include "dirichlet/problem.hpp"
#include "dirichlet/solver.hpp"

namespace dirichlet::cli {

enum ExitCode : int { ok = 0, violated = 1, solver_failed = 2, usage_error = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::vector<std::size_t>> ns;
};

inline std::string num(double v) { return dirichlet::detail::format_number(v); }

inline SolverConfig solver_config(const ProblemConfig& cfg) {
    SolverConfig s;
    if (cfg.tol) s.tol = *cfg.tol;
    if (cfg.max_iter) s.max_iter = *cfg.max_iter;
    return s;
}

// ---------------------------------------------------------------------------
// check

inline nlohmann::json to_json(const ConditionReport& r, std::size_t max_witnesses) {
    nlohmann::json j;
    j["condition"] = r.condition;
    j["verdict"] = to_string(r.verdict);
    j["samples_t"] = r.samples_t;
    j["samples_x"] = r.samples_x;
    j["x_range"] = r.x_range;
    j["violations"] = r.witnesses.size();
    auto& ws = j["witnesses"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.witnesses.size() && i < max_witnesses; ++i) {
        const Witness& w = r.witnesses[i];
        ws.push_back({{"t", w.t}, {"x", w.x}, {"lhs", w.lhs}, {"rhs", w.rhs}});
    }
    return j;
}

inline void render_report(std::ostream& out, const ConditionReport& r, const char* lhs_name,
                          const char* rhs_name) {
    out << r.condition << ": " << to_string(r.verdict) << " (" << r.samples() << " samples on [0,1] x [-"
        << num(r.x_range) << ", " << num(r.x_range) << "])\n";
    if (r.witnesses.empty()) return;
    out << "  " << r.witnesses.size() << " violating samples; first witnesses:\n";
    out << "  t,x," << lhs_name << "," << rhs_name << "\n";
    for (std::size_t i = 0; i < r.witnesses.size() && i < 5; ++i) {
        const Witness& w = r.witnesses[i];
        out << "  " << num(w.t) << "," << num(w.x) << "," << num(w.lhs) << "," << num(w.rhs) << "\n";
    }
}

inline int run_check(const ProblemConfig& cfg, std::ostream& product, std::ostream& summary) {
    const ConfiguredProblem problem = build_problem(cfg);
    const ProblemSpec& spec = problem.spec;
    SampleGrid grid;
    grid.x_range = cfg.x_range ? *cfg.x_range : default_x_range(spec);
    if (cfg.samples_t) grid.samples_t = *cfg.samples_t;
    if (cfg.samples_x) grid.samples_x = *cfg.samples_x;

    const ConditionReport growth = check_growth(spec, grid);
    const ConditionReport lower = check_fx_lower(spec, grid);
    const Classification cls = classify(spec);

    product << "problem: " << cfg.name << "\n";
    product << "declared: A=" << num(spec.declared_A()) << " B=" << num(spec.declared_B())
            << " fx_lower=" << num(spec.declared_fx_lower()) << "\n";
    render_report(product, growth, "|f|", "A|x|+B");
    render_report(product, lower, "f_x", "fx_lower");
    product << "discrete theorem (A < 1, fx_lower > -1): "
            << (cls.discrete_theorem_applies ? "applies" : "does not apply") << "\n";
    product << "continuous theorem (A < pi^2, fx_lower > -pi^2): "
            << (cls.continuous_theorem_applies ? "applies" : "does not apply") << "\n";
    std::optional<double> m;
    if (spec.declared_A() < 1.0) {
        m = apriori_bound(spec, sampled_v_sup(spec));
        product << "a-priori bound M: " << num(*m) << "\n";
    }

    nlohmann::json j;
    j["problem"] = cfg.name;
    j["reports"] = {to_json(growth, 100), to_json(lower, 100)};
    j["classification"] = {{"discrete_theorem_applies", cls.discrete_theorem_applies},
                           {"continuous_theorem_applies", cls.continuous_theorem_applies}};
    j["apriori_bound"] = m ? nlohmann::json(*m) : nlohmann::json(nullptr);
    product << "--- json ---\n" << j.dump(2) << "\n";

    const bool bad = growth.verdict == Verdict::violated || lower.verdict == Verdict::violated ||
                     !cls.discrete_theorem_applies;
    summary << cfg.name << ": " << (bad ? "conditions violated" : "no violation found") << "\n";
    return bad ? violated : ok;
}

// ---------------------------------------------------------------------------
// solve

inline int run_solve(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& product,
                     std::ostream& summary) {
    const std::optional<std::size_t> n = opts.n ? opts.n : cfg.n;
    if (!n) throw UsageError("solve needs N (config field 'N' or --n)");
    if (*n < 2) throw UsageError("N must be >= 2");
    const ConfiguredProblem problem = build_problem(cfg);
    const ProblemSpec& spec = problem.spec;
    const Classification cls = classify(spec);
    if (!cls.discrete_theorem_applies) {
        summary << "warning: declared constants do not meet the discrete solvability conditions\n";
    }

    const SolveReport report = newton_solve(spec, *n, solver_config(cfg));
    product << "k,t,x\n";
    for (std::size_t k = 0; k <= *n; ++k) {
        product << k << "," << num(report.solution.t(k)) << "," << num(report.solution[k]) << "\n";
    }

    summary << "status: " << to_string(report.status) << "\n";
    if (!report.message.empty()) summary << "message: " << report.message << "\n";
    summary << "iterations: " << report.iterations << "\n";
    summary << "residual_norm: " << num(report.residual_norm) << " (tolerance " << num(report.tolerance)
            << ")\n";
    summary << "sup_norm: " << num(norms(report.solution).sup_norm) << "\n";
    if (spec.declared_A() < 1.0) {
        summary << "apriori_bound: " << num(apriori_bound(spec, grid_v_sup(spec, *n))) << "\n";
    }
    for (const StepRecord& s : report.step_trace) {
        summary << "  iter " << s.iteration << ": residual " << num(s.residual_norm) << ", step "
                << num(s.step_length) << "\n";
    }
    return report.converged() ? ok : solver_failed;
}

// ---------------------------------------------------------------------------
// converge

inline void write_table_csv(std::ostream& out, const ConvergenceTable& table) {
    out << "N,sup_error,empirical_order,derivative_bound\n";
    for (const ConvergenceRow& row : table.rows) {
        out << row.n << "," << num(row.sup_error) << ","
            << (row.empirical_order ? num(*row.empirical_order) : "") << "," << num(row.derivative_bound)
            << "\n";
    }
}

inline int run_converge(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& product,
                        std::ostream& summary) {
    const std::optional<std::vector<std::size_t>> ns = opts.ns ? opts.ns : cfg.ns;
    if (!ns) throw UsageError("converge needs Ns (config field 'Ns' or --ns)");
    const ConfiguredProblem problem = build_problem(cfg);
    const SolverConfig scfg = solver_config(cfg);
    const ConvergenceTable table = problem.x_star ? run_study(*problem.manufactured(), *ns, scfg, cfg.name)
                                                  : run_study(problem.spec, *ns, scfg, cfg.name);
    write_table_csv(product, table);
    summary << cfg.name << ": reference " << to_string(table.reference) << ", " << table.rows.size()
            << " rows";
    if (!table.rows.empty()) {
        summary << ", max derivative bound " << num(derivative_bound_check(table));
    }
    summary << "\n";
    if (table.failure) {
        summary << "failure: " << *table.failure << "\n";
        return solver_failed;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// norms

inline int run_norms(const std::optional<ProblemConfig>& cfg, const RunOptions& opts,
                     std::ostream& product, std::ostream& summary) {
    std::vector<std::size_t> ns{2, 4, 8, 16, 32, 64};
    if (cfg && cfg->ns) ns = *cfg->ns;
    if (opts.ns) ns = *opts.ns;
    if (opts.n) ns = {*opts.n};
    std::uint64_t seed = 0;
    if (cfg && cfg->seed) seed = *cfg->seed;
    if (opts.seed) seed = *opts.seed;
    const std::size_t trials = cfg && cfg->trials ? *cfg->trials : 3;

    SeededUniform rng(seed);
    bool all_hold = true;
    product << "N,trial,quarter_e,half_delta,n_norm,sqrtN_sup,N_delta,N2_e,holds\n";
    for (std::size_t n : ns) {
        if (n < 2) throw UsageError("every N must be >= 2");
        const double nn = static_cast<double>(n);
        for (std::size_t trial = 0; trial < trials; ++trial) {
            std::vector<double> interior(n - 1);
            for (double& v : interior) v = rng.next(-1.0, 1.0);
            const Norms m = norms(GridFunction::from_interior(interior));
            const double chain[] = {0.25 * m.e_norm,   0.5 * m.delta_norm, m.n_norm,
                                    std::sqrt(nn) * m.sup_norm, nn * m.delta_norm,
                                    nn * nn * m.e_norm};
            bool holds = true;
            for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
                holds = holds && chain[i] <= chain[i + 1] + 1e-12 * (1.0 + chain[i + 1]);
            }
            all_hold = all_hold && holds;
            product << n << "," << trial;
            for (double c : chain) product << "," << num(c);
            product << "," << (holds ? "true" : "false") << "\n";
        }
    }
    summary << "norm chain " << (all_hold ? "holds" : "FAILS") << " on " << ns.size() * trials
            << " random elements (seed " << seed << ")\n";
    return all_hold ? ok : violated;
}

/// Dispatches one command. `config` may be empty only for "norms".
inline int run(std::string_view command, const std::optional<ProblemConfig>& config,
               const RunOptions& opts, std::ostream& product, std::ostream& summary) {
    if (command == "norms") {
        return run_norms(config, opts, product, summary);
    }
    if (command != "check" && command != "solve" && command != "converge") {
        throw UsageError("unknown command '" + std::string(command) + "'");
    }
    if (!config) throw UsageError(std::string(command) + " needs --config or --builtin");
    if (command == "check") return run_check(*config, product, summary);
    if (command == "solve") return run_solve(*config, opts, product, summary);
    return run_converge(*config, opts, product, summary);
}

}  // namespace dirichlet::cli
