#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "dirichlet/cli.hpp"
#include "dirichlet/config.hpp"
#include "dirichlet/corpus.hpp"

namespace dirichlet {
namespace {

const std::string config_dir = DIRICHLET_CONFIG_DIR;

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "test.cfg");
    } catch (const ConfigError& err) {
        return err.what();
    }
    return {};
}

constexpr const char* minimal = "f = x/10\nv = 1\nA = 0.2\nB = 0.1\nfx_lower = 0\n";

TEST(Config, LoadsFirstExample) {
    const ProblemConfig cfg = load_config(config_dir + "/f1.cfg");
    EXPECT_EQ(cfg.name, "f1");
    EXPECT_EQ(cfg.A, 0.1);
    EXPECT_EQ(cfg.B, 0.5);
    EXPECT_EQ(cfg.fx_lower, -0.25);
    EXPECT_EQ(cfg.n, 100u);
    EXPECT_EQ(*cfg.ns, (std::vector<std::size_t>{8, 16, 32, 64}));
    const ConfiguredProblem p = build_problem(cfg);
    EXPECT_FALSE(p.x_star.has_value());
    EXPECT_NEAR(p.spec.eval_fx(0.0, 0.0), 0.25, 1e-15);
}

TEST(Config, EveryShippedConfigLoads) {
    for (const char* name : {"f1", "f2", "f3", "f1_sin", "quadratic", "zero", "bad_derivative", "singular"}) {
        EXPECT_NO_THROW(build_problem(load_config(config_dir + "/" + name + ".cfg"))) << name;
    }
}

TEST(Config, JsonMatchesTextForm) {
    const ProblemConfig a = load_config(config_dir + "/f1_sin.json");
    const ProblemConfig b = load_config(config_dir + "/f1_sin.cfg");
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.f, b.f);
    EXPECT_EQ(a.x_star, b.x_star);
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(a.ns, b.ns);
    EXPECT_TRUE(build_problem(a).manufactured().has_value());
}

TEST(Config, DefaultNameIsFileStem) {
    EXPECT_EQ(parse_config_text(minimal, "x.cfg", "stem").name, "stem");
}

TEST(Config, MissingFieldIsNamed) {
    EXPECT_NE(error_of("f = x\nv = 1\nA = 0.1\nfx_lower = 0\n").find("missing field 'B'"), std::string::npos);
    EXPECT_NE(error_of("f = x\nA = 0.1\nB = 1\nfx_lower = 0\n").find("missing field 'v'"), std::string::npos);
}

TEST(Config, SyntaxErrorCarriesPosition) {
    const std::string msg = error_of("f = x +\nv = 1\nA = 0.1\nB = 1\nfx_lower = 0\n");
    EXPECT_NE(msg.find("field 'f'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("position 4"), std::string::npos) << msg;
}

TEST(Config, StructuralErrors) {
    EXPECT_NE(error_of(std::string(minimal) + "colour = red\n").find("unknown field 'colour'"), std::string::npos);
    EXPECT_NE(error_of(std::string(minimal) + "A = 0.3\n").find("duplicate field 'A'"), std::string::npos);
    EXPECT_NE(error_of(std::string(minimal) + "just words\n").find("test.cfg:6"), std::string::npos);
    EXPECT_NE(error_of(std::string(minimal) + "N = 1\n").find("'N'"), std::string::npos);
    EXPECT_NE(error_of(std::string(minimal) + "Ns = 4, x\n").find("'Ns'"), std::string::npos);
    EXPECT_THROW(parse_config_json("[1, 2]", "a.json"), ConfigError);
    EXPECT_THROW(parse_config_json("{\"f\": ", "a.json"), ConfigError);
    EXPECT_THROW(load_config(config_dir + "/nope.cfg"), ConfigError);
}

TEST(Config, CommentsAndConstantExpressions) {
    const ProblemConfig cfg =
        parse_config_text("# heading\nf = 0   # trailing\nv = 1\nA = 1/10\nB = 2*pi\nfx_lower = exp(-pi) - 1\n");
    EXPECT_DOUBLE_EQ(cfg.A, 0.1);
    EXPECT_DOUBLE_EQ(cfg.B, 2 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(cfg.fx_lower, std::exp(-std::numbers::pi) - 1.0);
}

TEST(Config, XStarAndVMustAgree) {
    const std::string base = "f = 0\nx_star = t^2 - t\nA = 0.1\nB = 0.1\nfx_lower = 0\n";
    EXPECT_NO_THROW(build_problem(parse_config_text(base + "v = 2\n")));
    EXPECT_THROW(build_problem(parse_config_text(base + "v = 3\n")), ConfigError);
}

TEST(Corpus, EntriesBuild) {
    for (const ProblemConfig& cfg : corpus::all()) {
        EXPECT_NO_THROW(build_problem(cfg)) << cfg.name;
    }
    EXPECT_THROW(corpus::get("f9"), ConfigError);
}

struct Outcome {
    int code;
    std::string product;
    std::string summary;
};

Outcome run_cli(std::string_view command, const std::optional<ProblemConfig>& cfg, cli::RunOptions opts = {}) {
    std::ostringstream product;
    std::ostringstream summary;
    const int code = cli::run(command, cfg, opts, product, summary);
    return {code, product.str(), summary.str()};
}

TEST(Cli, SolveQuadraticCsv) {
    const Outcome out = run_cli("solve", load_config(config_dir + "/quadratic.cfg"));
    EXPECT_EQ(out.code, cli::ok);
    EXPECT_EQ(out.product.rfind("k,t,x\n", 0), 0u);
    const auto row = out.product.find("\n5,0.5,");
    ASSERT_NE(row, std::string::npos) << out.product;
    EXPECT_NEAR(std::stod(out.product.substr(row + 7)), -0.25, 1e-14);
    EXPECT_NE(out.product.find("\n10,1,0\n"), std::string::npos);
    EXPECT_NE(out.summary.find("status: converged"), std::string::npos);
}

TEST(Cli, SolveFailureExitCode) {
    const Outcome out = run_cli("solve", load_config(config_dir + "/singular.cfg"));
    EXPECT_EQ(out.code, cli::solver_failed);
    EXPECT_NE(out.summary.find("singular_jacobian"), std::string::npos);
}

TEST(Cli, SolveNeedsN) {
    ProblemConfig cfg = corpus::get("f1");
    cfg.n.reset();
    EXPECT_THROW(run_cli("solve", cfg), cli::UsageError);
    cli::RunOptions opts;
    opts.n = 16;
    EXPECT_EQ(run_cli("solve", cfg, opts).code, cli::ok);
}

TEST(Cli, CheckVerdicts) {
    const Outcome good = run_cli("check", load_config(config_dir + "/f1.cfg"));
    EXPECT_EQ(good.code, cli::ok);
    EXPECT_NE(good.product.find("--- json ---"), std::string::npos);

    const Outcome bad = run_cli("check", load_config(config_dir + "/bad_derivative.cfg"));
    EXPECT_EQ(bad.code, cli::violated);
    EXPECT_NE(bad.product.find("violated"), std::string::npos);
}

TEST(Cli, CheckSampleFailurePropagates) {
    ProblemConfig cfg = corpus::get("f1");
    cfg.f = "1/x";
    cfg.x_range = 1.0;
    cfg.samples_x = 3;
    EXPECT_THROW(run_cli("check", cfg), EvalError);
}

TEST(Cli, ConvergeCsvIsDeterministic) {
    const ProblemConfig cfg = load_config(config_dir + "/f1_sin.json");
    const Outcome a = run_cli("converge", cfg);
    const Outcome b = run_cli("converge", cfg);
    EXPECT_EQ(a.code, cli::ok);
    EXPECT_EQ(a.product, b.product);
    EXPECT_EQ(a.product.rfind("N,sup_error,empirical_order,derivative_bound\n8,", 0), 0u) << a.product;
    // The first row has no order.
    const std::string first = a.product.substr(a.product.find('\n') + 1);
    EXPECT_NE(first.substr(0, first.find('\n')).find(",,"), std::string::npos);
}

TEST(Cli, ConvergeNsOverride) {
    cli::RunOptions opts;
    opts.ns = std::vector<std::size_t>{16, 32};
    const Outcome out = run_cli("converge", corpus::get("f2"), opts);
    EXPECT_EQ(out.code, cli::ok);
    EXPECT_NE(out.summary.find("fine-grid"), std::string::npos);
    EXPECT_EQ(std::count(out.product.begin(), out.product.end(), '\n'), 3);
}

TEST(Cli, NormsChainHolds) {
    cli::RunOptions opts;
    opts.seed = 3;
    const Outcome out = run_cli("norms", std::nullopt, opts);
    EXPECT_EQ(out.code, cli::ok);
    EXPECT_EQ(out.product.find("false"), std::string::npos);
    EXPECT_EQ(std::count(out.product.begin(), out.product.end(), '\n'), 1 + 6 * 3);
    EXPECT_EQ(out.product, run_cli("norms", std::nullopt, opts).product);
}

TEST(Cli, UsageErrors) {
    EXPECT_THROW(run_cli("frobnicate", corpus::get("f1")), cli::UsageError);
    EXPECT_THROW(run_cli("check", std::nullopt), cli::UsageError);
    ProblemConfig cfg = corpus::get("f1");
    cfg.ns.reset();
    EXPECT_THROW(run_cli("converge", cfg), cli::UsageError);
}

}  // namespace
}  // namespace dirichlet
