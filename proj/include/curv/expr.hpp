#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace curv {

/// Byte range [begin, end) into the source string a node was parsed from.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end   = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, SourceSpan span)
        : std::runtime_error(std::move(message)), span_(span) {}
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(std::string message, SourceSpan span)
        : std::runtime_error(std::move(message)), span_(span) {}
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable AST node for the scalar expression language.
///
/// Nodes are shared freely between threads once built; nothing mutates them
/// after construction.
struct Expr {
    enum class Kind {
        Number,  ///< numeric literal
        Pi,      ///< named constant
        Var,     ///< variable reference (x<k> or u<k>)
        Neg,     ///< unary minus
        Add,
        Sub,
        Mul,
        Div,
        Pow,     ///< integer-literal exponent only
        Call,    ///< unary function application
    };

    Kind kind = Kind::Number;
    double number = 0.0;       // Kind::Number
    std::string name;          // Kind::Var (variable) or Kind::Call (function)
    int exponent = 0;          // Kind::Pow
    ExprPtr lhs;               // operand / left operand / call argument
    ExprPtr rhs;               // right operand of binary ops
    SourceSpan span;
};

/// Unary function entry: value, first and second derivative, plus a domain
/// guard returning an error message for inadmissible arguments (or nullptr).
struct UnaryFn {
    double (*f)(double);
    double (*df)(double);
    double (*ddf)(double);
    const char* (*domain_error)(double);
};

/// Looks up one of the supported unary functions (sin, cos, tan, exp, ln,
/// sqrt, sinh, cosh, tanh, atan). Returns nullptr for unknown names.
const UnaryFn* lookup_unary(const std::string& name);

/// Parses `source` against the expression grammar. Free variables must be
/// members of `allowed_vars`; anything else is a located error.
ExprPtr parse(const std::string& source, const std::vector<std::string>& allowed_vars);

/// Plain double evaluation. Every free variable of `e` must be bound.
double eval_value(const Expr& e, const std::map<std::string, double>& bindings);

/// Renders the expression so that parse(to_string(e)) is structurally
/// identical to e.
std::string to_string(const Expr& e);

/// Structural equality (used by the round-trip tests and entry sharing).
bool expr_equal(const Expr& a, const Expr& b);

/// Collects free variable names in first-occurrence order.
std::vector<std::string> free_variables(const Expr& e);

// Convenience constructors used by chart builders.
ExprPtr make_number(double v);
ExprPtr make_var(const std::string& name);
ExprPtr make_pi();
ExprPtr make_neg(ExprPtr a);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, int k);
ExprPtr make_call(const std::string& fn, ExprPtr a);

/// Rewrites variable references through `renames` (old name -> new name).
/// Names absent from the map are kept.
ExprPtr rename_variables(const ExprPtr& e, const std::map<std::string, std::string>& renames);

} // namespace curv
