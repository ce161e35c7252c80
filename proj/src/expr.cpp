#include "curv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace curv {

namespace {

const char* guard_none(double) { return nullptr; }
const char* guard_positive(double x) {
    return x > 0.0 ? nullptr : "argument must be positive";
}

double fn_sin(double x) { return std::sin(x); }
double fn_cos(double x) { return std::cos(x); }
double fn_neg_sin(double x) { return -std::sin(x); }
double fn_neg_cos(double x) { return -std::cos(x); }
double fn_tan(double x) { return std::tan(x); }
double fn_tan_d(double x) { double t = std::tan(x); return 1.0 + t * t; }
double fn_tan_dd(double x) { double t = std::tan(x); return 2.0 * t * (1.0 + t * t); }
double fn_exp(double x) { return std::exp(x); }
double fn_ln(double x) { return std::log(x); }
double fn_ln_d(double x) { return 1.0 / x; }
double fn_ln_dd(double x) { return -1.0 / (x * x); }
double fn_sqrt(double x) { return std::sqrt(x); }
double fn_sqrt_d(double x) { return 0.5 / std::sqrt(x); }
double fn_sqrt_dd(double x) { return -0.25 / (x * std::sqrt(x)); }
double fn_sinh(double x) { return std::sinh(x); }
double fn_cosh(double x) { return std::cosh(x); }
double fn_tanh(double x) { return std::tanh(x); }
double fn_tanh_d(double x) { double t = std::tanh(x); return 1.0 - t * t; }
double fn_tanh_dd(double x) { double t = std::tanh(x); return -2.0 * t * (1.0 - t * t); }
double fn_atan(double x) { return std::atan(x); }
double fn_atan_d(double x) { return 1.0 / (1.0 + x * x); }
double fn_atan_dd(double x) { double w = 1.0 + x * x; return -2.0 * x / (w * w); }

struct NamedFn {
    const char* name;
    UnaryFn fn;
};

const NamedFn kFunctions[] = {
    {"sin",  {fn_sin, fn_cos, fn_neg_sin, guard_none}},
    {"cos",  {fn_cos, fn_neg_sin, fn_neg_cos, guard_none}},
    {"tan",  {fn_tan, fn_tan_d, fn_tan_dd, guard_none}},
    {"exp",  {fn_exp, fn_exp, fn_exp, guard_none}},
    {"ln",   {fn_ln, fn_ln_d, fn_ln_dd, guard_positive}},
    {"sqrt", {fn_sqrt, fn_sqrt_d, fn_sqrt_dd, guard_positive}},
    {"sinh", {fn_sinh, fn_cosh, fn_sinh, guard_none}},
    {"cosh", {fn_cosh, fn_sinh, fn_cosh, guard_none}},
    {"tanh", {fn_tanh, fn_tanh_d, fn_tanh_dd, guard_none}},
    {"atan", {fn_atan, fn_atan_d, fn_atan_dd, guard_none}},
};

ExprPtr node(Expr::Kind kind, SourceSpan span = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->span = span;
    return e;
}

// Mutable alias used only while a node is under construction.
Expr& mut(const ExprPtr& p) { return const_cast<Expr&>(*p); }

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    SourceSpan span = {};
    double number = 0.0;
    std::string text = {};
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::End, {start, start}};

        char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::Plus, {start, pos_}};
            case '-': ++pos_; return {Tok::Minus, {start, pos_}};
            case '*': ++pos_; return {Tok::Star, {start, pos_}};
            case '/': ++pos_; return {Tok::Slash, {start, pos_}};
            case '^': ++pos_; return {Tok::Caret, {start, pos_}};
            case '(': ++pos_; return {Tok::LParen, {start, pos_}};
            case ')': ++pos_; return {Tok::RParen, {start, pos_}};
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            return lex_number(start);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() &&
                   std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            Token t{Tok::Ident, {start, pos_}};
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", {start, start + 1});
    }

private:
    Token lex_number(std::size_t start) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark; // bare 'e' belongs to the next token
            }
        }
        Token t{Tok::Number, {start, pos_}};
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc{} || ptr != src_.data() + pos_) {
            throw ParseError("malformed numeric literal", {start, pos_});
        }
        t.number = value;
        return t;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser
//
//   expr   := term { ("+"|"-") term }
//   term   := factor { ("*"|"/") factor }
//   factor := ["-"] power
//   power  := atom [ "^" integer ]
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")" | "pi"
// ---------------------------------------------------------------------------

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& allowed)
        : lexer_(src), allowed_(allowed) {
        advance();
    }

    ExprPtr run() {
        ExprPtr e = parse_expr();
        if (cur_.kind != Tok::End) {
            throw ParseError("unexpected trailing input", cur_.span);
        }
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            bool plus = cur_.kind == Tok::Plus;
            advance();
            ExprPtr rhs = parse_term();
            ExprPtr b = node(plus ? Expr::Kind::Add : Expr::Kind::Sub,
                             {lhs->span.begin, rhs->span.end});
            mut(b).lhs = lhs;
            mut(b).rhs = rhs;
            lhs = b;
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            bool star = cur_.kind == Tok::Star;
            advance();
            ExprPtr rhs = parse_factor();
            ExprPtr b = node(star ? Expr::Kind::Mul : Expr::Kind::Div,
                             {lhs->span.begin, rhs->span.end});
            mut(b).lhs = lhs;
            mut(b).rhs = rhs;
            lhs = b;
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        if (cur_.kind == Tok::Minus) {
            SourceSpan start = cur_.span;
            advance();
            ExprPtr inner = parse_power();
            ExprPtr n = node(Expr::Kind::Neg, {start.begin, inner->span.end});
            mut(n).lhs = inner;
            return n;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (cur_.kind != Tok::Caret) return base;
        advance();
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            negative = true;
            advance();
        }
        if (cur_.kind != Tok::Number) {
            throw ParseError("'^' expects an integer-literal exponent", cur_.span);
        }
        double v = cur_.number;
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            throw ParseError("'^' exponent must be an integer literal", cur_.span);
        }
        SourceSpan exp_span = cur_.span;
        advance();
        ExprPtr p = node(Expr::Kind::Pow, {base->span.begin, exp_span.end});
        mut(p).lhs = base;
        mut(p).exponent = static_cast<int>(negative ? -v : v);
        return p;
    }

    ExprPtr parse_atom() {
        if (cur_.kind == Tok::Number) {
            ExprPtr e = node(Expr::Kind::Number, cur_.span);
            mut(e).number = cur_.number;
            advance();
            return e;
        }
        if (cur_.kind == Tok::LParen) {
            SourceSpan open = cur_.span;
            advance();
            ExprPtr e = parse_expr();
            expect_rparen(open);
            return e;
        }
        if (cur_.kind == Tok::Ident) {
            Token id = cur_;
            advance();
            if (cur_.kind == Tok::LParen) {
                const UnaryFn* fn = lookup_unary(id.text);
                if (!fn) {
                    throw ParseError("unknown function '" + id.text + "'", id.span);
                }
                SourceSpan open = cur_.span;
                advance();
                ExprPtr arg = parse_expr();
                SourceSpan close = expect_rparen(open);
                ExprPtr c = node(Expr::Kind::Call, {id.span.begin, close.end});
                mut(c).name = id.text;
                mut(c).lhs = arg;
                return c;
            }
            if (id.text == "pi") return node(Expr::Kind::Pi, id.span);
            if (std::find(allowed_.begin(), allowed_.end(), id.text) == allowed_.end()) {
                throw ParseError("unknown identifier '" + id.text + "'", id.span);
            }
            ExprPtr v = node(Expr::Kind::Var, id.span);
            mut(v).name = id.text;
            return v;
        }
        throw ParseError("expected a number, identifier, or '('", cur_.span);
    }

    SourceSpan expect_rparen(SourceSpan open) {
        if (cur_.kind != Tok::RParen) {
            throw ParseError("missing ')' for '(' ", open);
        }
        SourceSpan s = cur_.span;
        advance();
        return s;
    }

    Lexer lexer_;
    Token cur_{Tok::End, {0, 0}};
    const std::vector<std::string>& allowed_;
};

// Printing levels mirror the grammar so minimal parentheses round-trip.
enum Level { kAdd = 0, kMul = 1, kNeg = 2, kPow = 3, kAtom = 4 };

int level_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return kAdd;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return kMul;
        case Expr::Kind::Neg: return kNeg;
        case Expr::Kind::Pow: return kPow;
        default: return kAtom;
    }
}

void print(const Expr& e, int min_level, std::ostringstream& out) {
    bool parens = level_of(e) < min_level;
    if (parens) out << '(';
    switch (e.kind) {
        case Expr::Kind::Number: {
            std::ostringstream num;
            num.precision(17);
            num << e.number;
            std::string s = num.str();
            if (!s.empty() && s[0] == '-') {
                // A negative literal re-tokenizes as unary minus; parenthesize
                // so the reparse keeps the same shape at atom position.
                out << '(' << s << ')';
            } else {
                out << s;
            }
            break;
        }
        case Expr::Kind::Pi: out << "pi"; break;
        case Expr::Kind::Var: out << e.name; break;
        case Expr::Kind::Neg:
            out << '-';
            print(*e.lhs, kPow, out);
            break;
        case Expr::Kind::Add:
            print(*e.lhs, kAdd, out);
            out << " + ";
            print(*e.rhs, kMul, out);
            break;
        case Expr::Kind::Sub:
            print(*e.lhs, kAdd, out);
            out << " - ";
            print(*e.rhs, kMul, out);
            break;
        case Expr::Kind::Mul:
            print(*e.lhs, kMul, out);
            out << "*";
            print(*e.rhs, kNeg, out);
            break;
        case Expr::Kind::Div:
            print(*e.lhs, kMul, out);
            out << "/";
            print(*e.rhs, kNeg, out);
            break;
        case Expr::Kind::Pow:
            print(*e.lhs, kAtom, out);
            out << '^';
            if (e.exponent < 0) {
                out << '-' << -static_cast<long long>(e.exponent);
            } else {
                out << e.exponent;
            }
            break;
        case Expr::Kind::Call:
            out << e.name << '(';
            print(*e.lhs, kAdd, out);
            out << ')';
            break;
    }
    if (parens) out << ')';
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Var:
            if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
            break;
        case Expr::Kind::Number:
        case Expr::Kind::Pi:
            break;
        default:
            if (e.lhs) collect_vars(*e.lhs, out);
            if (e.rhs) collect_vars(*e.rhs, out);
            break;
    }
}

} // namespace

const UnaryFn* lookup_unary(const std::string& name) {
    for (const auto& entry : kFunctions) {
        if (name == entry.name) return &entry.fn;
    }
    return nullptr;
}

ExprPtr parse(const std::string& source, const std::vector<std::string>& allowed_vars) {
    Parser p(source, allowed_vars);
    return p.run();
}

double eval_value(const Expr& e, const std::map<std::string, double>& bindings) {
    switch (e.kind) {
        case Expr::Kind::Number: return e.number;
        case Expr::Kind::Pi: return M_PI;
        case Expr::Kind::Var: {
            auto it = bindings.find(e.name);
            if (it == bindings.end()) {
                throw EvalError("unbound variable '" + e.name + "'", e.span);
            }
            return it->second;
        }
        case Expr::Kind::Neg: return -eval_value(*e.lhs, bindings);
        case Expr::Kind::Add: return eval_value(*e.lhs, bindings) + eval_value(*e.rhs, bindings);
        case Expr::Kind::Sub: return eval_value(*e.lhs, bindings) - eval_value(*e.rhs, bindings);
        case Expr::Kind::Mul: return eval_value(*e.lhs, bindings) * eval_value(*e.rhs, bindings);
        case Expr::Kind::Div: {
            double num = eval_value(*e.lhs, bindings);
            double den = eval_value(*e.rhs, bindings);
            if (den == 0.0) throw EvalError("division by zero", e.span);
            return num / den;
        }
        case Expr::Kind::Pow: {
            double base = eval_value(*e.lhs, bindings);
            if (base == 0.0 && e.exponent < 0) {
                throw EvalError("zero raised to a negative power", e.span);
            }
            return std::pow(base, static_cast<double>(e.exponent));
        }
        case Expr::Kind::Call: {
            double arg = eval_value(*e.lhs, bindings);
            const UnaryFn* fn = lookup_unary(e.name);
            if (const char* err = fn->domain_error(arg)) {
                throw EvalError(e.name + ": " + err, e.span);
            }
            return fn->f(arg);
        }
    }
    throw EvalError("corrupt expression node", e.span);
}

std::string to_string(const Expr& e) {
    std::ostringstream out;
    print(e, kAdd, out);
    return out.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number: return a.number == b.number;
        case Expr::Kind::Pi: return true;
        case Expr::Kind::Var: return a.name == b.name;
        case Expr::Kind::Neg: return expr_equal(*a.lhs, *b.lhs);
        case Expr::Kind::Pow:
            return a.exponent == b.exponent && expr_equal(*a.lhs, *b.lhs);
        case Expr::Kind::Call:
            return a.name == b.name && expr_equal(*a.lhs, *b.lhs);
        default:
            return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
    }
}

std::vector<std::string> free_variables(const Expr& e) {
    std::vector<std::string> out;
    collect_vars(e, out);
    return out;
}

ExprPtr make_number(double v) {
    ExprPtr e = node(Expr::Kind::Number);
    mut(e).number = v;
    return e;
}

ExprPtr make_var(const std::string& name) {
    ExprPtr e = node(Expr::Kind::Var);
    mut(e).name = name;
    return e;
}

ExprPtr make_pi() { return node(Expr::Kind::Pi); }

ExprPtr make_neg(ExprPtr a) {
    ExprPtr e = node(Expr::Kind::Neg);
    mut(e).lhs = std::move(a);
    return e;
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
    ExprPtr e = node(Expr::Kind::Add);
    mut(e).lhs = std::move(a);
    mut(e).rhs = std::move(b);
    return e;
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
    ExprPtr e = node(Expr::Kind::Sub);
    mut(e).lhs = std::move(a);
    mut(e).rhs = std::move(b);
    return e;
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
    ExprPtr e = node(Expr::Kind::Mul);
    mut(e).lhs = std::move(a);
    mut(e).rhs = std::move(b);
    return e;
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
    ExprPtr e = node(Expr::Kind::Div);
    mut(e).lhs = std::move(a);
    mut(e).rhs = std::move(b);
    return e;
}

ExprPtr make_pow(ExprPtr a, int k) {
    ExprPtr e = node(Expr::Kind::Pow);
    mut(e).lhs = std::move(a);
    mut(e).exponent = k;
    return e;
}

ExprPtr make_call(const std::string& fn, ExprPtr a) {
    ExprPtr e = node(Expr::Kind::Call);
    mut(e).name = fn;
    mut(e).lhs = std::move(a);
    return e;
}

ExprPtr rename_variables(const ExprPtr& e, const std::map<std::string, std::string>& renames) {
    switch (e->kind) {
        case Expr::Kind::Var: {
            auto it = renames.find(e->name);
            if (it == renames.end()) return e;
            return make_var(it->second);
        }
        case Expr::Kind::Number:
        case Expr::Kind::Pi:
            return e;
        case Expr::Kind::Neg:
            return make_neg(rename_variables(e->lhs, renames));
        case Expr::Kind::Pow:
            return make_pow(rename_variables(e->lhs, renames), e->exponent);
        case Expr::Kind::Call:
            return make_call(e->name, rename_variables(e->lhs, renames));
        case Expr::Kind::Add:
            return make_add(rename_variables(e->lhs, renames), rename_variables(e->rhs, renames));
        case Expr::Kind::Sub:
            return make_sub(rename_variables(e->lhs, renames), rename_variables(e->rhs, renames));
        case Expr::Kind::Mul:
            return make_mul(rename_variables(e->lhs, renames), rename_variables(e->rhs, renames));
        case Expr::Kind::Div:
            return make_div(rename_variables(e->lhs, renames), rename_variables(e->rhs, renames));
    }
    return e;
}

} // namespace curv
