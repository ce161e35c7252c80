#include "support/oracles.hpp"

#include "curv/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

// ---------------------------------------------------------------------------
// Shunting-yard evaluator
// ---------------------------------------------------------------------------

enum class OpKind { Add, Sub, Mul, Div, Pow, Neg, LParen, Fn };

struct Op {
    OpKind kind;
    std::string fn;
};

int precedence(OpKind k) {
    switch (k) {
        case OpKind::Add:
        case OpKind::Sub: return 1;
        case OpKind::Mul:
        case OpKind::Div: return 2;
        case OpKind::Neg: return 3;
        case OpKind::Pow: return 4;
        default: return 0;
    }
}

bool left_assoc(OpKind k) {
    return k == OpKind::Add || k == OpKind::Sub || k == OpKind::Mul || k == OpKind::Div;
}

double apply_fn(const std::string& name, double x) {
    if (name == "sin") return std::sin(x);
    if (name == "cos") return std::cos(x);
    if (name == "tan") return std::tan(x);
    if (name == "exp") return std::exp(x);
    if (name == "ln") {
        if (!(x > 0.0)) throw std::runtime_error("ln domain");
        return std::log(x);
    }
    if (name == "sqrt") {
        if (!(x > 0.0)) throw std::runtime_error("sqrt domain");
        return std::sqrt(x);
    }
    if (name == "sinh") return std::sinh(x);
    if (name == "cosh") return std::cosh(x);
    if (name == "tanh") return std::tanh(x);
    if (name == "atan") return std::atan(x);
    throw std::runtime_error("unknown function " + name);
}

} // namespace

double shunting_yard_eval(const std::string& src, const std::map<std::string, double>& bindings) {
    std::vector<double> values;
    std::vector<Op> ops;

    auto pop_apply = [&]() {
        if (ops.empty()) throw std::runtime_error("operator stack underflow");
        Op op = ops.back();
        ops.pop_back();
        auto need = [&](std::size_t n) {
            if (values.size() < n) throw std::runtime_error("value stack underflow");
        };
        switch (op.kind) {
            case OpKind::Neg: {
                need(1);
                values.back() = -values.back();
                break;
            }
            case OpKind::Fn: {
                need(1);
                values.back() = apply_fn(op.fn, values.back());
                break;
            }
            case OpKind::LParen:
                throw std::runtime_error("unmatched parenthesis");
            default: {
                need(2);
                double b = values.back();
                values.pop_back();
                double a = values.back();
                values.pop_back();
                double r = 0.0;
                if (op.kind == OpKind::Add) r = a + b;
                if (op.kind == OpKind::Sub) r = a - b;
                if (op.kind == OpKind::Mul) r = a * b;
                if (op.kind == OpKind::Div) {
                    if (b == 0.0) throw std::runtime_error("division by zero");
                    r = a / b;
                }
                if (op.kind == OpKind::Pow) {
                    if (b != std::floor(b)) throw std::runtime_error("non-integer exponent");
                    if (a == 0.0 && b < 0.0) throw std::runtime_error("zero to negative power");
                    r = std::pow(a, b);
                }
                values.push_back(r);
                break;
            }
        }
    };

    auto push_operator = [&](OpKind kind) {
        while (!ops.empty() && ops.back().kind != OpKind::LParen &&
               (precedence(ops.back().kind) > precedence(kind) ||
                (precedence(ops.back().kind) == precedence(kind) && left_assoc(kind)))) {
            pop_apply();
        }
        ops.push_back({kind, ""});
    };

    std::size_t i = 0;
    bool expect_operand = true;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (expect_operand && c == '-') {
            ops.push_back({OpKind::Neg, ""});
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t end = i;
            while (end < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[end])) || src[end] == '.')) {
                ++end;
            }
            if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
                std::size_t mark = end;
                ++end;
                if (end < src.size() && (src[end] == '+' || src[end] == '-')) ++end;
                if (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) {
                    while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) {
                        ++end;
                    }
                } else {
                    end = mark;
                }
            }
            values.push_back(std::stod(src.substr(i, end - i)));
            i = end;
            expect_operand = false;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = i;
            while (end < src.size() && std::isalnum(static_cast<unsigned char>(src[end]))) ++end;
            std::string name = src.substr(i, end - i);
            i = end;
            std::size_t look = i;
            while (look < src.size() && std::isspace(static_cast<unsigned char>(src[look]))) ++look;
            if (look < src.size() && src[look] == '(') {
                ops.push_back({OpKind::Fn, name});
                expect_operand = true;
            } else if (name == "pi") {
                values.push_back(M_PI);
                expect_operand = false;
            } else {
                auto it = bindings.find(name);
                if (it == bindings.end()) throw std::runtime_error("unbound variable " + name);
                values.push_back(it->second);
                expect_operand = false;
            }
            continue;
        }
        switch (c) {
            case '+': push_operator(OpKind::Add); expect_operand = true; break;
            case '-': push_operator(OpKind::Sub); expect_operand = true; break;
            case '*': push_operator(OpKind::Mul); expect_operand = true; break;
            case '/': push_operator(OpKind::Div); expect_operand = true; break;
            case '^': push_operator(OpKind::Pow); expect_operand = true; break;
            case '(': ops.push_back({OpKind::LParen, ""}); expect_operand = true; break;
            case ')': {
                while (!ops.empty() && ops.back().kind != OpKind::LParen) pop_apply();
                if (ops.empty()) throw std::runtime_error("unmatched ')'");
                ops.pop_back();
                if (!ops.empty() && ops.back().kind == OpKind::Fn) pop_apply();
                expect_operand = false;
                break;
            }
            default:
                throw std::runtime_error(std::string("unexpected character '") + c + "'");
        }
        ++i;
    }
    while (!ops.empty()) pop_apply();
    if (values.size() != 1) throw std::runtime_error("malformed expression");
    return values.front();
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

Eigen::VectorXd fd_gradient(const ScalarFn& f, const Eigen::VectorXd& x, double h) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd fd_hessian(const ScalarFn& f, const Eigen::VectorXd& x, double h) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd hess(n, n);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        hess(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h; xpp[j] += h;
            xpm[i] += h; xpm[j] -= h;
            xmp[i] -= h; xmp[j] += h;
            xmm[i] -= h; xmm[j] -= h;
            hess(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
            hess(j, i) = hess(i, j);
        }
    }
    return hess;
}

// ---------------------------------------------------------------------------
// Finite-difference curvature
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd metric_values(const curv::MetricChart& chart, const Eigen::VectorXd& x) {
    const int m = chart.dim();
    std::map<std::string, double> bind;
    for (int i = 0; i < m; ++i) bind[chart.var_order()[static_cast<std::size_t>(i)]] = x[i];
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) g(i, j) = curv::eval_value(*chart.entry(i, j), bind);
    }
    return g;
}

} // namespace

FdCurvature fd_curvature(const curv::MetricChart& chart, const Eigen::VectorXd& point, double h) {
    const int m = chart.dim();
    auto g_at = [&](const Eigen::VectorXd& x) { return metric_values(chart, x); };

    const Eigen::MatrixXd g0 = g_at(point);

    // dg[a] and d2g[a][b] by central differences of whole matrices.
    std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(m));
    std::vector<Eigen::MatrixXd> d2g(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a) {
        Eigen::VectorXd xp = point, xm = point;
        xp[a] += h;
        xm[a] -= h;
        const Eigen::MatrixXd gp = g_at(xp);
        const Eigen::MatrixXd gm = g_at(xm);
        dg[static_cast<std::size_t>(a)] = (gp - gm) / (2.0 * h);
        d2g[static_cast<std::size_t>(a) * m + a] = (gp - 2.0 * g0 + gm) / (h * h);
    }
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            Eigen::VectorXd xpp = point, xpm = point, xmp = point, xmm = point;
            xpp[a] += h; xpp[b] += h;
            xpm[a] += h; xpm[b] -= h;
            xmp[a] -= h; xmp[b] += h;
            xmm[a] -= h; xmm[b] -= h;
            Eigen::MatrixXd cross =
                (g_at(xpp) - g_at(xpm) - g_at(xmp) + g_at(xmm)) / (4.0 * h * h);
            d2g[static_cast<std::size_t>(a) * m + b] = cross;
            d2g[static_cast<std::size_t>(b) * m + a] = cross;
        }
    }

    const Eigen::MatrixXd ginv = g0.inverse();

    // Christoffels of both kinds, then the curvature tensor, all spelled out.
    std::vector<double> gamma(static_cast<std::size_t>(m) * m * m, 0.0);
    auto G = [&](int i, int j, int k) -> double& {
        return gamma[(static_cast<std::size_t>(i) * m + j) * m + k];
    };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                double s = 0.0;
                for (int l = 0; l < m; ++l) {
                    s += ginv(i, l) * (dg[static_cast<std::size_t>(j)](l, k) +
                                       dg[static_cast<std::size_t>(k)](j, l) -
                                       dg[static_cast<std::size_t>(l)](j, k));
                }
                G(i, j, k) = 0.5 * s;
            }
        }
    }

    // d_a Gamma^e_bc via d(g^-1) = -g^-1 dg g^-1 and the second derivatives.
    auto dGamma = [&](int a, int e, int b, int c) {
        double s = 0.0;
        const Eigen::MatrixXd dginv =
            -ginv * dg[static_cast<std::size_t>(a)] * ginv;
        for (int l = 0; l < m; ++l) {
            s += dginv(e, l) * (dg[static_cast<std::size_t>(b)](l, c) +
                                dg[static_cast<std::size_t>(c)](b, l) -
                                dg[static_cast<std::size_t>(l)](b, c));
            s += ginv(e, l) * (d2g[static_cast<std::size_t>(a) * m + b](l, c) +
                               d2g[static_cast<std::size_t>(a) * m + c](b, l) -
                               d2g[static_cast<std::size_t>(a) * m + l](b, c));
        }
        return 0.5 * s;
    };

    FdCurvature out;
    out.g = g0;
    out.riemann = curv::Tensor4(m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                for (int e = 0; e < m; ++e) {
                    double comp = dGamma(a, e, b, c) - dGamma(b, e, a, c);
                    for (int f = 0; f < m; ++f) {
                        comp += G(f, b, c) * G(e, a, f) - G(f, a, c) * G(e, b, f);
                    }
                    for (int d = 0; d < m; ++d) {
                        out.riemann(a, b, c, d) += g0(e, d) * comp;
                    }
                }
            }
        }
    }
    return out;
}

std::vector<std::vector<Eigen::VectorXd>> fd_alpha_coord(const curv::ImmersionChart& im,
                                                         const Eigen::VectorXd& u, double h) {
    const int r = im.domain_dim;
    const int m = im.ambient_dim();

    auto f_at = [&](const Eigen::VectorXd& uu) {
        std::map<std::string, double> bind;
        for (int a = 0; a < r; ++a) bind[im.var_order()[static_cast<std::size_t>(a)]] = uu[a];
        Eigen::VectorXd p(m);
        for (int i = 0; i < m; ++i) {
            p[i] = curv::eval_value(*im.components[static_cast<std::size_t>(i)], bind);
        }
        return p;
    };

    const Eigen::VectorXd p0 = f_at(u);
    Eigen::MatrixXd jac(m, r);
    std::vector<Eigen::MatrixXd> second(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(r, r));
    for (int a = 0; a < r; ++a) {
        Eigen::VectorXd up = u, um = u;
        up[a] += h;
        um[a] -= h;
        const Eigen::VectorXd fp = f_at(up), fm = f_at(um);
        jac.col(a) = (fp - fm) / (2.0 * h);
        const Eigen::VectorXd dd = (fp - 2.0 * p0 + fm) / (h * h);
        for (int i = 0; i < m; ++i) second[static_cast<std::size_t>(i)](a, a) = dd[i];
    }
    for (int a = 0; a < r; ++a) {
        for (int b = a + 1; b < r; ++b) {
            Eigen::VectorXd upp = u, upm = u, ump = u, umm = u;
            upp[a] += h; upp[b] += h;
            upm[a] += h; upm[b] -= h;
            ump[a] -= h; ump[b] += h;
            umm[a] -= h; umm[b] -= h;
            const Eigen::VectorXd cross =
                (f_at(upp) - f_at(upm) - f_at(ump) + f_at(umm)) / (4.0 * h * h);
            for (int i = 0; i < m; ++i) {
                second[static_cast<std::size_t>(i)](a, b) = cross[i];
                second[static_cast<std::size_t>(i)](b, a) = cross[i];
            }
        }
    }

    // Ambient metric and Christoffels at p0, from the fd pipeline again.
    const curv::MetricChart& chart = im.ambient->metric();
    const Eigen::MatrixXd g = metric_values(chart, p0);
    std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        Eigen::VectorXd xp = p0, xm = p0;
        xp[a] += h;
        xm[a] -= h;
        dg[static_cast<std::size_t>(a)] = (metric_values(chart, xp) - metric_values(chart, xm)) / (2.0 * h);
    }
    const Eigen::MatrixXd ginv = g.inverse();
    auto gamma = [&](int i, int j, int k) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) {
            s += ginv(i, l) * (dg[static_cast<std::size_t>(j)](l, k) +
                               dg[static_cast<std::size_t>(k)](j, l) -
                               dg[static_cast<std::size_t>(l)](j, k));
        }
        return 0.5 * s;
    };

    // Own modified Gram-Schmidt for the tangent projector.
    std::vector<Eigen::VectorXd> frame;
    for (int a = 0; a < r; ++a) {
        Eigen::VectorXd w = jac.col(a);
        for (const auto& e : frame) w -= e.dot(g * w) * e;
        w /= std::sqrt(w.dot(g * w));
        frame.push_back(w);
    }
    Eigen::MatrixXd pperp = Eigen::MatrixXd::Identity(m, m);
    for (const auto& e : frame) pperp -= e * (g * e).transpose();

    std::vector<std::vector<Eigen::VectorXd>> alpha(
        static_cast<std::size_t>(r), std::vector<Eigen::VectorXd>(static_cast<std::size_t>(r)));
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            Eigen::VectorXd d(m);
            for (int i = 0; i < m; ++i) {
                double v = second[static_cast<std::size_t>(i)](a, b);
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        v += gamma(i, j, k) * jac(j, a) * jac(k, b);
                    }
                }
                d[i] = v;
            }
            alpha[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = pperp * d;
        }
    }
    return alpha;
}

double brute_ricci(const curv::CurvatureData& cd, const Eigen::VectorXd& w,
                   const Eigen::VectorXd& eta) {
    const auto frame = curv::orthonormal_frame(cd.g);
    double sum = 0.0;
    for (const auto& v : frame) {
        sum += curv::riemann_inner(cd, v, w, v, eta);
    }
    return -sum;
}

// ---------------------------------------------------------------------------
// Random expressions
// ---------------------------------------------------------------------------

curv::ExprPtr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
    using curv::ExprPtr;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Literals stay non-negative: the grammar spells negative constants as
    // unary minus, so a tree with a negative literal is not a parse result.
    std::uniform_real_distribution<double> literal(0.0, 3.0);
    std::uniform_int_distribution<int> var_pick(0, static_cast<int>(vars.size()) - 1);

    if (depth <= 0 || unit(rng) < 0.25) {
        if (unit(rng) < 0.5) return curv::make_number(literal(rng));
        if (unit(rng) < 0.05) return curv::make_pi();
        return curv::make_var(vars[static_cast<std::size_t>(var_pick(rng))]);
    }
    const double roll = unit(rng);
    if (roll < 0.12) return curv::make_neg(random_expr(rng, vars, depth - 1));
    if (roll < 0.34) {
        return curv::make_add(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
    if (roll < 0.48) {
        return curv::make_sub(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
    if (roll < 0.68) {
        return curv::make_mul(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
    if (roll < 0.76) {
        return curv::make_div(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
    if (roll < 0.85) {
        std::uniform_int_distribution<int> expo(-2, 4);
        return curv::make_pow(random_expr(rng, vars, depth - 1), expo(rng));
    }
    static const char* fns[] = {"sin", "cos", "tan", "exp", "ln",
                                "sqrt", "sinh", "cosh", "tanh", "atan"};
    std::uniform_int_distribution<int> fn_pick(0, 9);
    return curv::make_call(fns[fn_pick(rng)], random_expr(rng, vars, depth - 1));
}

SampledExpr sample_smooth_expr(std::mt19937_64& rng, const std::vector<std::string>& vars,
                               double stencil_h) {
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    const int n = static_cast<int>(vars.size());
    for (int attempt = 0; attempt < 10000; ++attempt) {
        curv::ExprPtr e = random_expr(rng, vars, 4);
        Eigen::VectorXd point(n);
        for (int i = 0; i < n; ++i) point[i] = coord(rng);

        // The full second-order stencil must evaluate and stay tame.
        bool ok = true;
        auto eval_at = [&](const Eigen::VectorXd& x) {
            std::map<std::string, double> bind;
            for (int i = 0; i < n; ++i) bind[vars[static_cast<std::size_t>(i)]] = x[i];
            return curv::eval_value(*e, bind);
        };
        try {
            std::vector<Eigen::VectorXd> stencil = {point};
            for (int i = 0; i < n; ++i) {
                for (double s : {-2.0, -1.0, 1.0, 2.0}) {
                    Eigen::VectorXd x = point;
                    x[i] += s * stencil_h;
                    stencil.push_back(x);
                }
                for (int j = i + 1; j < n; ++j) {
                    for (double si : {-1.0, 1.0}) {
                        for (double sj : {-1.0, 1.0}) {
                            Eigen::VectorXd x = point;
                            x[i] += si * stencil_h;
                            x[j] += sj * stencil_h;
                            stencil.push_back(x);
                        }
                    }
                }
            }
            for (const auto& x : stencil) {
                const double v = eval_at(x);
                if (!std::isfinite(v) || std::abs(v) > 1e3) {
                    ok = false;
                    break;
                }
            }
        } catch (const curv::EvalError&) {
            ok = false;
        }
        if (ok) return {curv::to_string(*e), point};
    }
    throw std::runtime_error("could not sample a smooth expression");
}

} // namespace oracles
