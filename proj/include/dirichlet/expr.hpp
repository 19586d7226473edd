#pragma once

// Scalar expressions in the two variables t and x: a small recursive-descent
// parser, a checked evaluator, and exact symbolic partial derivatives.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 't' | 'x' | 'pi' | 'e'
//            | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | atan | sqrt | abs
//
// Exponents must be free of variables; they are folded to a number at parse
// time. There is no implicit multiplication.

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dirichlet {

enum class Var { t, x };
enum class Func { sin, cos, exp, atan, sqrt, abs };
enum class BinaryOp { add, sub, mul, div };

inline const char* to_string(Var v) { return v == Var::t ? "t" : "x"; }

inline const char* to_string(Func f) {
    switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::exp: return "exp";
        case Func::atan: return "atan";
        case Func::sqrt: return "sqrt";
        case Func::abs: return "abs";
    }
    return "?";
}

/// Syntax, unknown-identifier and arity errors. position() is a 0-based
/// byte offset into the parsed text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position + 1)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Domain failure during evaluation (division by zero, sqrt of a negative
/// number, overflow). Evaluation never returns NaN or infinity.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Differentiation of a node without a continuous derivative (abs).
class DiffError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Expr;

namespace node {
struct Constant;
struct Variable;
struct Binary;
struct Negate;
struct Power;
struct Call;
}  // namespace node

using Node = std::variant<node::Constant, node::Variable, node::Binary, node::Negate, node::Power,
                          node::Call>;

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    Expr();

    static Expr constant(double value, std::string name = {});
    static Expr variable(Var v);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr negate(Expr operand);
    static Expr power(Expr base, double exponent);
    static Expr call(Func f, Expr arg);

    const Node& node() const noexcept;

    template <typename T>
    const T* as() const noexcept;

    bool is_constant(double value) const noexcept;

private:
    explicit Expr(Node n);

    std::shared_ptr<const Node> node_;
};

namespace node {
struct Constant {
    double value;
    std::string name;  // "pi", "e" or empty
};
struct Variable {
    Var var;
};
struct Binary {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct Negate {
    Expr operand;
};
struct Power {
    Expr base;
    double exponent;
};
struct Call {
    Func func;
    Expr arg;
};
}  // namespace node

inline Expr::Expr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
inline Expr::Expr() : Expr(Node{node::Constant{0.0, {}}}) {}

inline Expr Expr::constant(double value, std::string name) {
    return Expr(Node{node::Constant{value, std::move(name)}});
}
inline Expr Expr::variable(Var v) { return Expr(Node{node::Variable{v}}); }
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(Node{node::Binary{op, std::move(lhs), std::move(rhs)}});
}
inline Expr Expr::negate(Expr operand) { return Expr(Node{node::Negate{std::move(operand)}}); }
inline Expr Expr::power(Expr base, double exponent) {
    if (!std::isfinite(exponent)) {
        throw std::invalid_argument("power exponent must be finite");
    }
    return Expr(Node{node::Power{std::move(base), exponent}});
}
inline Expr Expr::call(Func f, Expr arg) { return Expr(Node{node::Call{f, std::move(arg)}}); }

inline const Node& Expr::node() const noexcept { return *node_; }

template <typename T>
const T* Expr::as() const noexcept {
    return std::get_if<T>(node_.get());
}

inline bool Expr::is_constant(double value) const noexcept {
    const auto* c = as<node::Constant>();
    return c != nullptr && c->value == value;
}

// Raw constructors: the tree is built exactly as written.
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::div, a, b); }
inline Expr operator-(const Expr& a) { return Expr::negate(a); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double checked(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw EvalError(std::string("non-finite result in ") + what);
    }
    return value;
}

inline bool is_integer(double v) { return std::floor(v) == v; }

}  // namespace detail

inline double eval(const Expr& e, double t, double x) {
    return std::visit(
        [&](const auto& n) -> double {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<N, node::Variable>) {
                return n.var == Var::t ? t : x;
            } else if constexpr (std::is_same_v<N, node::Binary>) {
                const double a = eval(n.lhs, t, x);
                const double b = eval(n.rhs, t, x);
                switch (n.op) {
                    case BinaryOp::add: return detail::checked(a + b, "addition");
                    case BinaryOp::sub: return detail::checked(a - b, "subtraction");
                    case BinaryOp::mul: return detail::checked(a * b, "multiplication");
                    case BinaryOp::div:
                        if (b == 0.0) {
                            throw EvalError("division by zero");
                        }
                        return detail::checked(a / b, "division");
                }
                return 0.0;
            } else if constexpr (std::is_same_v<N, node::Negate>) {
                return -eval(n.operand, t, x);
            } else if constexpr (std::is_same_v<N, node::Power>) {
                const double base = eval(n.base, t, x);
                if (detail::is_integer(n.exponent)) {
                    if (base == 0.0 && n.exponent < 0.0) {
                        throw EvalError("division by zero in negative power");
                    }
                } else if (base <= 0.0) {
                    throw EvalError("non-integer power of a non-positive base");
                }
                return detail::checked(std::pow(base, n.exponent), "power");
            } else {
                const double a = eval(n.arg, t, x);
                switch (n.func) {
                    case Func::sin: return std::sin(a);
                    case Func::cos: return std::cos(a);
                    case Func::exp: return detail::checked(std::exp(a), "exp");
                    case Func::atan: return std::atan(a);
                    case Func::sqrt:
                        if (a < 0.0) {
                            throw EvalError("sqrt of a negative number");
                        }
                        return std::sqrt(a);
                    case Func::abs: return std::abs(a);
                }
                return 0.0;
            }
        },
        e.node());
}

/// True if the variable occurs anywhere in the tree.
inline bool depends_on(const Expr& e, Var v) {
    return std::visit(
        [&](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Constant>) {
                return false;
            } else if constexpr (std::is_same_v<N, node::Variable>) {
                return n.var == v;
            } else if constexpr (std::is_same_v<N, node::Binary>) {
                return depends_on(n.lhs, v) || depends_on(n.rhs, v);
            } else if constexpr (std::is_same_v<N, node::Negate>) {
                return depends_on(n.operand, v);
            } else if constexpr (std::is_same_v<N, node::Power>) {
                return depends_on(n.base, v);
            } else {
                return depends_on(n.arg, v);
            }
        },
        e.node());
}

/// Replaces every occurrence of `v` by `replacement`.
inline Expr substitute(const Expr& e, Var v, const Expr& replacement) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Constant>) {
                return e;
            } else if constexpr (std::is_same_v<N, node::Variable>) {
                return n.var == v ? replacement : e;
            } else if constexpr (std::is_same_v<N, node::Binary>) {
                return Expr::binary(n.op, substitute(n.lhs, v, replacement),
                                    substitute(n.rhs, v, replacement));
            } else if constexpr (std::is_same_v<N, node::Negate>) {
                return Expr::negate(substitute(n.operand, v, replacement));
            } else if constexpr (std::is_same_v<N, node::Power>) {
                return Expr::power(substitute(n.base, v, replacement), n.exponent);
            } else {
                return Expr::call(n.func, substitute(n.arg, v, replacement));
            }
        },
        e.node());
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string format_number(double v) {
    // Shortest text that reads back to the same double.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Binding strength used to decide where parentheses are needed.
inline int precedence(const Expr& e) {
    if (const auto* b = e.as<node::Binary>()) {
        return (b->op == BinaryOp::add || b->op == BinaryOp::sub) ? 1 : 2;
    }
    if (e.as<node::Negate>() != nullptr) {
        return 3;
    }
    if (e.as<node::Power>() != nullptr) {
        return 4;
    }
    if (const auto* c = e.as<node::Constant>(); c != nullptr && c->name.empty() && c->value < 0) {
        return 3;
    }
    return 5;
}

}  // namespace detail

/// Renders text that parses back to an expression with identical values.
inline std::string to_string(const Expr& e) {
    auto wrap = [](const Expr& sub, int min_prec) {
        std::string s = to_string(sub);
        return detail::precedence(sub) < min_prec ? "(" + s + ")" : s;
    };
    return std::visit(
        [&](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Constant>) {
                return n.name.empty() ? detail::format_number(n.value) : n.name;
            } else if constexpr (std::is_same_v<N, node::Variable>) {
                return to_string(n.var);
            } else if constexpr (std::is_same_v<N, node::Binary>) {
                static constexpr const char* symbols[] = {" + ", " - ", "*", "/"};
                const int p = detail::precedence(e);
                // Left-associative: the right operand needs strictly higher binding.
                return wrap(n.lhs, p) + symbols[static_cast<int>(n.op)] + wrap(n.rhs, p + 1);
            } else if constexpr (std::is_same_v<N, node::Negate>) {
                return "-" + wrap(n.operand, 3);
            } else if constexpr (std::is_same_v<N, node::Power>) {
                std::string exponent = detail::format_number(n.exponent);
                if (n.exponent < 0) {
                    exponent = "(" + exponent + ")";
                }
                return wrap(n.base, 5) + "^" + exponent;
            } else {
                return std::string(to_string(n.func)) + "(" + to_string(n.arg) + ")";
            }
        },
        e.node());
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        skip_space();
        if (pos_ == text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        Expr e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + parse_term();
            } else if (accept('-')) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * parse_unary();
            } else if (accept('/')) {
                lhs = lhs / parse_unary();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) {
            return -parse_unary();
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        skip_space();
        const std::size_t at = pos_;
        if (!accept('^')) {
            return base;
        }
        Expr exponent = parse_unary();
        if (depends_on(exponent, Var::t) || depends_on(exponent, Var::x)) {
            throw ParseError("exponent must be a constant", at);
        }
        double value = 0.0;
        try {
            value = eval(exponent, 0.0, 0.0);
        } catch (const EvalError& err) {
            throw ParseError(std::string("invalid exponent: ") + err.what(), at);
        }
        return Expr::power(std::move(base), value);
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ == text_.size()) {
            throw ParseError("unexpected end of expression", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return parse_identifier();
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t count = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++count;
            }
            return count;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw ParseError("malformed number", start);
        }
        // An exponent marker only counts when digits follow; otherwise the
        // 'e' is left for the identifier rule (and rejected as implicit
        // multiplication).
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        const std::string literal(text_.substr(start, pos_ - start));
        const double value = std::strtod(literal.c_str(), nullptr);
        if (!std::isfinite(value)) {
            throw ParseError("number out of range", start);
        }
        return Expr::constant(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") {
            return Expr::variable(Var::t);
        }
        if (name == "x") {
            return Expr::variable(Var::x);
        }
        if (name == "pi") {
            return Expr::constant(std::numbers::pi, "pi");
        }
        if (name == "e") {
            return Expr::constant(std::numbers::e, "e");
        }
        static constexpr Func funcs[] = {Func::sin, Func::cos, Func::exp,
                                         Func::atan, Func::sqrt, Func::abs};
        for (Func f : funcs) {
            if (name == to_string(f)) {
                return parse_call(f, start);
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    Expr parse_call(Func f, std::size_t start) {
        if (!accept('(')) {
            throw ParseError(std::string("expected '(' after ") + to_string(f), pos_);
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ')') {
            throw ParseError(std::string(to_string(f)) + " takes exactly 1 argument, got 0", start);
        }
        std::vector<Expr> args;
        args.push_back(parse_expr());
        while (accept(',')) {
            args.push_back(parse_expr());
        }
        expect(')');
        if (args.size() != 1) {
            throw ParseError(std::string(to_string(f)) + " takes exactly 1 argument, got " +
                                 std::to_string(args.size()),
                             start);
        }
        return Expr::call(f, std::move(args.front()));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Differentiation

namespace detail {

// Folding constructors used only when building derivatives, so that nested
// derivatives of sums and products do not drag along chains of "+ 0" and
// "* 1". They never change the value of a subtree that is evaluated.
inline Expr add(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return a + b;
}
inline Expr sub(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return a - b;
}
inline Expr mul(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return a * b;
}
inline Expr neg(const Expr& a) {
    if (a.is_constant(0.0)) return a;
    if (const auto* inner = a.as<node::Negate>()) return inner->operand;
    return -a;
}

}  // namespace detail

/// Exact partial derivative with respect to `v`. No simplification beyond
/// dropping literal zeros and ones; compare results by evaluation.
inline Expr diff(const Expr& e, Var v) {
    using namespace detail;
    return std::visit(
        [&](const auto& n) -> Expr {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, node::Constant>) {
                return Expr::constant(0.0);
            } else if constexpr (std::is_same_v<N, node::Variable>) {
                return Expr::constant(n.var == v ? 1.0 : 0.0);
            } else if constexpr (std::is_same_v<N, node::Binary>) {
                const Expr da = diff(n.lhs, v);
                const Expr db = diff(n.rhs, v);
                switch (n.op) {
                    case BinaryOp::add: return add(da, db);
                    case BinaryOp::sub: return sub(da, db);
                    case BinaryOp::mul: return add(mul(da, n.rhs), mul(n.lhs, db));
                    case BinaryOp::div:
                        if (db.is_constant(0.0)) {
                            return da.is_constant(0.0) ? da : da / n.rhs;
                        }
                        return sub(mul(da, n.rhs), mul(n.lhs, db)) / Expr::power(n.rhs, 2.0);
                }
                return Expr::constant(0.0);
            } else if constexpr (std::is_same_v<N, node::Negate>) {
                return neg(diff(n.operand, v));
            } else if constexpr (std::is_same_v<N, node::Power>) {
                const Expr du = diff(n.base, v);
                if (du.is_constant(0.0) || n.exponent == 0.0) {
                    return Expr::constant(0.0);
                }
                const Expr outer = n.exponent == 1.0
                                       ? Expr::constant(1.0)
                                       : mul(Expr::constant(n.exponent),
                                             n.exponent == 2.0 ? n.base
                                                               : Expr::power(n.base, n.exponent - 1.0));
                return mul(outer, du);
            } else {
                const Expr du = diff(n.arg, v);
                if (n.func == Func::abs) {
                    throw DiffError("abs has no continuous derivative");
                }
                if (du.is_constant(0.0)) {
                    return Expr::constant(0.0);
                }
                switch (n.func) {
                    case Func::sin: return mul(Expr::call(Func::cos, n.arg), du);
                    case Func::cos: return neg(mul(Expr::call(Func::sin, n.arg), du));
                    case Func::exp: return mul(Expr::call(Func::exp, n.arg), du);
                    case Func::atan:
                        return du / (Expr::constant(1.0) + Expr::power(n.arg, 2.0));
                    case Func::sqrt:
                        return du / (Expr::constant(2.0) * Expr::call(Func::sqrt, n.arg));
                    case Func::abs: break;
                }
                return Expr::constant(0.0);
            }
        },
        e.node());
}

}  // namespace dirichlet
