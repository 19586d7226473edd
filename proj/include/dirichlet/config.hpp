#pragma once

// Problem configuration files.
//
// The default format is flat "key = value" text, one field per line, with
// '#' starting a comment line. Expression values run unquoted to the end of
// the line. Files ending in ".json" hold a JSON object with the same keys.
// Numeric fields accept constant expressions such as "exp(-pi) - 1".
//
//   name     = f1_sin
//   f        = (t + sin(x))/(2*x^2 + 4)
//   x_star   = sin(pi*t)
//   A        = 0.1
//   B        = 0.5
//   fx_lower = -0.25
//   Ns       = 8, 16, 32, 64, 128

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dirichlet/convergence.hpp"
#include "dirichlet/expr.hpp"
#include "dirichlet/problem.hpp"

namespace dirichlet {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemConfig {
    std::string name;
    std::string f;
    std::optional<std::string> v;  ///< derived from x_star when absent
    double A = 0.0;
    double B = 0.0;
    double fx_lower = 0.0;
    std::optional<std::string> fx;  ///< overrides the symbolic f_x
    std::optional<std::string> x_star;
    std::optional<std::size_t> n;
    std::optional<std::vector<std::size_t>> ns;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::uint64_t> seed;
    std::optional<double> x_range;
    std::optional<std::size_t> samples_t;
    std::optional<std::size_t> samples_x;
    std::optional<std::size_t> trials;
};

/// A validated problem, manufactured when x_star was given.
struct ConfiguredProblem {
    ProblemSpec spec;
    std::optional<Expr> x_star;

    std::optional<ManufacturedProblem> manufactured() const {
        if (!x_star) return std::nullopt;
        return ManufacturedProblem{spec, *x_star};
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(const std::string& field, const std::string& text) {
    Expr e;
    try {
        e = parse(text);
    } catch (const ParseError& err) {
        throw ConfigError("field '" + field + "': " + err.what());
    }
    if (depends_on(e, Var::t) || depends_on(e, Var::x)) {
        throw ConfigError("field '" + field + "' must be a constant");
    }
    try {
        return eval(e, 0.0, 0.0);
    } catch (const EvalError& err) {
        throw ConfigError("field '" + field + "': " + err.what());
    }
}

inline std::uint64_t parse_unsigned(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
        value = std::stoull(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': expected a non-negative integer, got '" + text + "'");
    }
    if (used != text.size()) {
        throw ConfigError("field '" + field + "': expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

inline std::vector<std::size_t> parse_list(const std::string& field, const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_unsigned(field, trim(item)));
    }
    if (out.empty()) {
        throw ConfigError("field '" + field + "': empty list");
    }
    return out;
}

inline void check_expression(const std::string& field, const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ParseError& err) {
        throw ConfigError("field '" + field + "': " + err.what());
    }
}

// Assembles a ProblemConfig from raw string fields.
inline ProblemConfig from_fields(const std::map<std::string, std::string>& fields,
                                 const std::string& default_name) {
    static const char* known[] = {"name", "f", "v", "A", "B", "fx_lower", "fx", "x_star", "N", "Ns",
                                  "tol", "max_iter", "seed", "x_range", "samples_t", "samples_x",
                                  "trials"};
    for (const auto& [key, value] : fields) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown field '" + key + "'");
    }
    auto require = [&](const char* key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) throw ConfigError(std::string("missing field '") + key + "'");
        return it->second;
    };
    auto optional = [&](const char* key) -> std::optional<std::string> {
        const auto it = fields.find(key);
        if (it == fields.end()) return std::nullopt;
        return it->second;
    };

    ProblemConfig cfg;
    cfg.name = optional("name").value_or(default_name);
    cfg.f = require("f");
    check_expression("f", cfg.f);
    cfg.v = optional("v");
    cfg.x_star = optional("x_star");
    cfg.fx = optional("fx");
    if (!cfg.v && !cfg.x_star) {
        throw ConfigError("missing field 'v' (required unless x_star is given)");
    }
    for (const auto* key : {"v", "x_star", "fx"}) {
        if (auto text = optional(key)) check_expression(key, *text);
    }
    cfg.A = parse_real("A", require("A"));
    cfg.B = parse_real("B", require("B"));
    cfg.fx_lower = parse_real("fx_lower", require("fx_lower"));
    if (auto s = optional("N")) cfg.n = parse_unsigned("N", *s);
    if (auto s = optional("Ns")) cfg.ns = parse_list("Ns", *s);
    if (auto s = optional("tol")) cfg.tol = parse_real("tol", *s);
    if (auto s = optional("max_iter")) cfg.max_iter = parse_unsigned("max_iter", *s);
    if (auto s = optional("seed")) cfg.seed = parse_unsigned("seed", *s);
    if (auto s = optional("x_range")) cfg.x_range = parse_real("x_range", *s);
    if (auto s = optional("samples_t")) cfg.samples_t = parse_unsigned("samples_t", *s);
    if (auto s = optional("samples_x")) cfg.samples_x = parse_unsigned("samples_x", *s);
    if (auto s = optional("trials")) cfg.trials = parse_unsigned("trials", *s);
    if (cfg.n && *cfg.n < 2) throw ConfigError("field 'N' must be >= 2");
    if (cfg.ns) {
        for (std::size_t n : *cfg.ns) {
            if (n < 2) throw ConfigError("field 'Ns': every entry must be >= 2");
        }
    }
    return cfg;
}

inline std::string json_field_text(const std::string& key, const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
    if (value.is_number_float()) return format_number(value.get<double>());
    if (value.is_array()) {
        std::string out;
        for (const auto& item : value) {
            if (!item.is_number_integer() && !item.is_number_unsigned()) {
                throw ConfigError("field '" + key + "': list entries must be integers");
            }
            if (!out.empty()) out += ",";
            out += item.dump();
        }
        return out;
    }
    throw ConfigError("field '" + key + "': unsupported JSON value");
}

}  // namespace detail

/// Parses the key = value format. `source` labels error messages.
inline ProblemConfig parse_config_text(std::string_view text, const std::string& source = "config",
                                       const std::string& default_name = "problem") {
    std::map<std::string, std::string> fields;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (!fields.emplace(key, value).second) {
            throw ConfigError(where + ": duplicate field '" + key + "'");
        }
    }
    try {
        return detail::from_fields(fields, default_name);
    } catch (const ConfigError& err) {
        throw ConfigError(source + ": " + err.what());
    }
}

inline ProblemConfig parse_config_json(std::string_view text, const std::string& source = "config",
                                       const std::string& default_name = "problem") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(source + ": " + err.what());
    }
    if (!doc.is_object()) throw ConfigError(source + ": top level must be a JSON object");
    std::map<std::string, std::string> fields;
    try {
        for (const auto& [key, value] : doc.items()) {
            fields.emplace(key, detail::json_field_text(key, value));
        }
        return detail::from_fields(fields, default_name);
    } catch (const ConfigError& err) {
        throw ConfigError(source + ": " + err.what());
    }
}

inline ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string stem = path.stem().string();
    if (path.extension() == ".json") {
        return parse_config_json(buf.str(), path.string(), stem);
    }
    return parse_config_text(buf.str(), path.string(), stem);
}

/// Turns a config into a validated problem. With x_star present, v is
/// manufactured; a v given alongside must agree with it on [0,1].
inline ConfiguredProblem build_problem(const ProblemConfig& cfg) {
    try {
        const Expr f = parse(cfg.f);
        std::optional<Expr> fx;
        if (cfg.fx) fx = parse(*cfg.fx);
        if (!cfg.x_star) {
            return ConfiguredProblem{
                ProblemSpec::make(f, parse(*cfg.v), cfg.A, cfg.B, cfg.fx_lower, fx), std::nullopt};
        }
        ManufacturedProblem m = manufacture(f, parse(*cfg.x_star), cfg.A, cfg.B, cfg.fx_lower);
        ProblemSpec spec = fx ? ProblemSpec::make(f, m.spec.v(), cfg.A, cfg.B, cfg.fx_lower, fx)
                              : m.spec;
        if (cfg.v) {
            const Expr given = parse(*cfg.v);
            for (int i = 0; i <= 100; ++i) {
                const double t = i / 100.0;
                const double a = eval(given, t, 0.0);
                const double b = spec.eval_v(t);
                if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(b))) {
                    throw ConfigError("field 'v' disagrees with the v manufactured from x_star at t=" +
                                      detail::format_number(t));
                }
            }
        }
        return ConfiguredProblem{std::move(spec), m.x_star};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& err) {
        throw ConfigError(cfg.name + ": " + err.what());
    }
}

}  // namespace dirichlet
