// dirichlet: check hypotheses, solve, and run refinement studies for the
// discrete Dirichlet problem d2x(k-1) = (f(k/N, x(k)) + v(k/N))/N^2.
//
//   dirichlet check|solve|converge|norms --config <path> [--output <path>]
//             [--seed <int>] [--n <int>] [--ns <comma list>]

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dirichlet/cli.hpp"
#include "dirichlet/config.hpp"
#include "dirichlet/corpus.hpp"

int main(int argc, char** argv) {
    namespace cli = dirichlet::cli;

    CLI::App app{"Solver and convergence checks for the discrete nonlinear Dirichlet problem"};
    std::string command;
    std::string config_path;
    std::string builtin;
    std::string output;
    std::string ns_text;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;

    app.add_option("command", command, "check | solve | converge | norms")
        ->required()
        ->check(CLI::IsMember({"check", "solve", "converge", "norms"}));
    auto* config_opt = app.add_option("--config", config_path, "problem config (key = value, or .json)");
    app.add_option("--builtin", builtin, "built-in problem name (f1, f2, f3, f1_sin, ...)")
        ->excludes(config_opt);
    app.add_option("--output", output, "write the CSV/report here instead of stdout");
    app.add_option("--seed", seed, "seed for random elements (norms)");
    app.add_option("--n", n, "subdivision count N (overrides config)");
    app.add_option("--ns", ns_text, "comma-separated list of N (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::usage_error;
    }

    try {
        cli::RunOptions opts;
        opts.seed = seed;
        opts.n = n;
        if (!ns_text.empty()) {
            opts.ns = dirichlet::detail::parse_list("--ns", ns_text);
        }
        std::optional<dirichlet::ProblemConfig> config;
        if (!config_path.empty()) {
            config = dirichlet::load_config(config_path);
        } else if (!builtin.empty()) {
            config = dirichlet::corpus::get(builtin);
        }

        if (output.empty()) {
            return cli::run(command, config, opts, std::cout, std::cerr);
        }
        std::ostringstream product;
        const int code = cli::run(command, config, opts, product, std::cout);
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << output << "'\n";
            return cli::usage_error;
        }
        out << product.str();
        return code;
    } catch (const dirichlet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return cli::usage_error;
}
