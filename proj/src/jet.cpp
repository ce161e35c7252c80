#include "curv/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace curv {

namespace {

void check_same_vars(const Jet2& a, const Jet2& b) {
    if (a.vars() != b.vars()) {
        throw std::invalid_argument("jet arity mismatch");
    }
}

/// f(u) with precomputed f(u0), f'(u0), f''(u0):
///   grad = f' * u.grad
///   hess = f' * u.hess + f'' * u.grad u.grad^T
///
/// Outer products are materialized before any scalar touches them: if the
/// scalar fused into the lazy product it would round one factor only, and
/// entry (i,j) would differ from (j,i) in the last ulp.
Jet2 chain(const Jet2& u, double f, double df, double ddf) {
    Jet2 out;
    out.value = f;
    out.grad = df * u.grad;
    const Eigen::MatrixXd outer = u.grad * u.grad.transpose();
    out.hess = df * u.hess + ddf * outer;
    return out;
}

} // namespace

Jet2 Jet2::seed(const Eigen::VectorXd& point, int index) {
    const int n = static_cast<int>(point.size());
    if (index < 0 || index >= n) {
        throw std::out_of_range("jet seed index out of range");
    }
    Jet2 j = Jet2::constant(point[index], n);
    j.grad[index] = 1.0;
    return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    check_same_vars(a, b);
    return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    check_same_vars(a, b);
    return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
}

Jet2 operator-(const Jet2& a) {
    return {-a.value, -a.grad, -a.hess};
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    check_same_vars(a, b);
    Jet2 out;
    out.value = a.value * b.value;
    out.grad = a.grad * b.value + b.grad * a.value;
    const Eigen::MatrixXd outer =
        a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
    out.hess = a.hess * b.value + b.hess * a.value + outer;
    return out;
}

Jet2 jet_div(const Jet2& a, const Jet2& b, SourceSpan span) {
    check_same_vars(a, b);
    if (b.value == 0.0) throw EvalError("division by zero", span);
    Jet2 q;
    q.value = a.value / b.value;
    q.grad = (a.grad - q.value * b.grad) / b.value;
    const Eigen::MatrixXd outer =
        q.grad * b.grad.transpose() + b.grad * q.grad.transpose();
    q.hess = (a.hess - q.value * b.hess - outer) / b.value;
    return q;
}

Jet2 jet_pow(const Jet2& a, int k, SourceSpan span) {
    if (a.value == 0.0 && k < 0) {
        throw EvalError("zero raised to a negative power", span);
    }
    const double u = a.value;
    const double f = std::pow(u, static_cast<double>(k));
    const double df = (k == 0) ? 0.0 : k * std::pow(u, static_cast<double>(k - 1));
    const double ddf =
        (k == 0 || k == 1)
            ? 0.0
            : static_cast<double>(k) * (k - 1) * std::pow(u, static_cast<double>(k - 2));
    return chain(a, f, df, ddf);
}

Jet2 jet_call(const std::string& name, const Jet2& a, SourceSpan span) {
    const UnaryFn* fn = lookup_unary(name);
    if (!fn) throw EvalError("unknown function '" + name + "'", span);
    if (const char* err = fn->domain_error(a.value)) {
        throw EvalError(name + ": " + err, span);
    }
    return chain(a, fn->f(a.value), fn->df(a.value), fn->ddf(a.value));
}

namespace {

Jet2 eval_rec(const Expr& e, const Eigen::VectorXd& point,
              const std::vector<std::string>& var_order) {
    const int n = static_cast<int>(point.size());
    switch (e.kind) {
        case Expr::Kind::Number: return Jet2::constant(e.number, n);
        case Expr::Kind::Pi: return Jet2::constant(M_PI, n);
        case Expr::Kind::Var: {
            for (int i = 0; i < n; ++i) {
                if (var_order[static_cast<std::size_t>(i)] == e.name) {
                    return Jet2::seed(point, i);
                }
            }
            throw EvalError("unbound variable '" + e.name + "'", e.span);
        }
        case Expr::Kind::Neg: return -eval_rec(*e.lhs, point, var_order);
        case Expr::Kind::Add:
            return eval_rec(*e.lhs, point, var_order) + eval_rec(*e.rhs, point, var_order);
        case Expr::Kind::Sub:
            return eval_rec(*e.lhs, point, var_order) - eval_rec(*e.rhs, point, var_order);
        case Expr::Kind::Mul:
            return eval_rec(*e.lhs, point, var_order) * eval_rec(*e.rhs, point, var_order);
        case Expr::Kind::Div:
            return jet_div(eval_rec(*e.lhs, point, var_order),
                           eval_rec(*e.rhs, point, var_order), e.span);
        case Expr::Kind::Pow:
            return jet_pow(eval_rec(*e.lhs, point, var_order), e.exponent, e.span);
        case Expr::Kind::Call:
            return jet_call(e.name, eval_rec(*e.lhs, point, var_order), e.span);
    }
    throw EvalError("corrupt expression node", e.span);
}

} // namespace

Jet2 eval_jet(const Expr& e, const Eigen::VectorXd& point,
              const std::vector<std::string>& var_order) {
    if (static_cast<std::size_t>(point.size()) != var_order.size()) {
        throw std::invalid_argument("point length does not match variable order");
    }
    return eval_rec(e, point, var_order);
}

} // namespace curv
