#pragma once

#include "curv/expr.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace curv {

/// Value, gradient, and Hessian of a scalar quantity with respect to the
/// active chart variables. All arithmetic propagates both derivative orders
/// exactly (to floating-point roundoff); the Hessian stays symmetric because
/// every rule below only ever adds symmetric terms.
struct Jet2 {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;

    Jet2() = default;
    Jet2(double v, Eigen::VectorXd g, Eigen::MatrixXd h)
        : value(v), grad(std::move(g)), hess(std::move(h)) {}

    int vars() const { return static_cast<int>(grad.size()); }

    static Jet2 constant(double v, int n) {
        return {v, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    }

    /// Seeds the `index`-th variable at `point`: unit gradient, zero Hessian.
    static Jet2 seed(const Eigen::VectorXd& point, int index);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);

/// Quotient rule; the caller's span is threaded through for error reporting.
Jet2 jet_div(const Jet2& a, const Jet2& b, SourceSpan span);

/// Integer power via the scalar chain rule.
Jet2 jet_pow(const Jet2& a, int k, SourceSpan span);

/// Applies one of the supported unary functions.
Jet2 jet_call(const std::string& name, const Jet2& a, SourceSpan span);

/// Evaluates `e` to a second-order jet at `point`, where var_order names the
/// active variables (free variables of e must be a subset). The value channel
/// performs exactly the arithmetic of eval_value, so the two agree bitwise.
Jet2 eval_jet(const Expr& e, const Eigen::VectorXd& point,
              const std::vector<std::string>& var_order);

} // namespace curv
