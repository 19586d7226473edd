#pragma once

// Built-in problems: the three example nonlinearities with constants that
// satisfy the discrete hypotheses, manufactured variants with x* = sin(pi t),
// and the quadratic and zero problems.
//
// Constants:
//   f1 = (t + sin x)/(2x^2 + 4):  |f1| <= 2/4, so A = 0.1, B = 0.5;
//                                 min f1_x ~ -0.158 > -0.25.
//   f2 = x e^(t-pi) - atan x + e^t:  |f2| <= e^(1-pi)|x| + pi/2 + e
//                                 < 0.12|x| + 4.3;  f2_x >= e^(-pi) - 1.
//   f3 = (x^3 + x^2 - x)/(2x^2 + 5) + t^3 - sin t:  f3 = x/2 + (x^2 - 3.5x)/(2x^2 + 5)
//                                 + t^3 - sin t, so A = 0.5, B = 1;
//                                 min f3_x ~ -0.245 > -0.3.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirichlet/config.hpp"

namespace dirichlet::corpus {

inline constexpr const char* f1 = "(t + sin(x))/(2*x^2 + 4)";
inline constexpr const char* f2 = "x*exp(t - pi) - atan(x) + exp(t)";
inline constexpr const char* f3 = "(x^3 + x^2 - x)/(2*x^2 + 5) + t^3 - sin(t)";

namespace detail {

inline ProblemConfig entry(std::string name, std::string f, std::optional<std::string> v,
                           std::optional<std::string> x_star, double A, double B, double fx_lower) {
    ProblemConfig cfg;
    cfg.name = std::move(name);
    cfg.f = std::move(f);
    cfg.v = std::move(v);
    cfg.x_star = std::move(x_star);
    cfg.A = A;
    cfg.B = B;
    cfg.fx_lower = fx_lower;
    return cfg;
}

}  // namespace detail

inline double f2_fx_lower() { return std::exp(-std::numbers::pi) - 1.0; }

inline std::vector<ProblemConfig> all() {
    using detail::entry;
    return {
        entry("f1", f1, "1", std::nullopt, 0.1, 0.5, -0.25),
        entry("f2", f2, "1", std::nullopt, 0.12, 4.3, f2_fx_lower()),
        entry("f3", f3, "1", std::nullopt, 0.5, 1.0, -0.3),
        entry("f1_sin", f1, std::nullopt, "sin(pi*t)", 0.1, 0.5, -0.25),
        entry("f2_sin", f2, std::nullopt, "sin(pi*t)", 0.12, 4.3, f2_fx_lower()),
        entry("f3_sin", f3, std::nullopt, "sin(pi*t)", 0.5, 1.0, -0.3),
        entry("quadratic", "0", "2", "t^2 - t", 0.01, 0.01, -0.5),
        entry("zero", "atan(x)/2", "0", "0", 0.1, 0.8, 0.0),
    };
}

inline ProblemConfig get(std::string_view name) {
    for (auto& cfg : all()) {
        if (cfg.name == name) return cfg;
    }
    throw ConfigError("no built-in problem named '" + std::string(name) + "'");
}

}  // namespace dirichlet::corpus
