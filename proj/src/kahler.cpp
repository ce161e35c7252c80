#include "curv/kahler.hpp"

#include "curv/jet.hpp"

#include <cmath>

namespace curv {

namespace {

bool is_number(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Number && e->number == v;
}

// Folding constructors for the derivative builder. They keep the trees from
// second partials of catalog potentials at a manageable size.
ExprPtr fadd(const ExprPtr& a, const ExprPtr& b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return make_number(a->number + b->number);
    }
    return make_add(a, b);
}

ExprPtr fneg(const ExprPtr& a) {
    if (a->kind == Expr::Kind::Number) return make_number(-a->number);
    if (a->kind == Expr::Kind::Neg) return a->lhs;
    return make_neg(a);
}

ExprPtr fsub(const ExprPtr& a, const ExprPtr& b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return fneg(b);
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return make_number(a->number - b->number);
    }
    return make_sub(a, b);
}

ExprPtr fmul(const ExprPtr& a, const ExprPtr& b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number) {
        return make_number(a->number * b->number);
    }
    return make_mul(a, b);
}

ExprPtr fdiv(const ExprPtr& a, const ExprPtr& b) {
    if (is_number(a, 0.0)) return make_number(0.0);
    if (is_number(b, 1.0)) return a;
    if (a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number && b->number != 0.0) {
        return make_number(a->number / b->number);
    }
    return make_div(a, b);
}

ExprPtr fpow(const ExprPtr& a, int k) {
    if (k == 0) return make_number(1.0);
    if (k == 1) return a;
    if (a->kind == Expr::Kind::Number) {
        return make_number(std::pow(a->number, static_cast<double>(k)));
    }
    return make_pow(a, k);
}

} // namespace

ExprPtr differentiate(const ExprPtr& e, const std::string& var) {
    switch (e->kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Pi:
            return make_number(0.0);
        case Expr::Kind::Var:
            return make_number(e->name == var ? 1.0 : 0.0);
        case Expr::Kind::Neg:
            return fneg(differentiate(e->lhs, var));
        case Expr::Kind::Add:
            return fadd(differentiate(e->lhs, var), differentiate(e->rhs, var));
        case Expr::Kind::Sub:
            return fsub(differentiate(e->lhs, var), differentiate(e->rhs, var));
        case Expr::Kind::Mul:
            return fadd(fmul(differentiate(e->lhs, var), e->rhs),
                        fmul(e->lhs, differentiate(e->rhs, var)));
        case Expr::Kind::Div:
            return fdiv(fsub(fmul(differentiate(e->lhs, var), e->rhs),
                             fmul(e->lhs, differentiate(e->rhs, var))),
                        fpow(e->rhs, 2));
        case Expr::Kind::Pow:
            return fmul(fmul(make_number(static_cast<double>(e->exponent)),
                             fpow(e->lhs, e->exponent - 1)),
                        differentiate(e->lhs, var));
        case Expr::Kind::Call: {
            const ExprPtr& u = e->lhs;
            ExprPtr du = differentiate(u, var);
            ExprPtr outer;
            if (e->name == "sin") {
                outer = make_call("cos", u);
            } else if (e->name == "cos") {
                outer = fneg(make_call("sin", u));
            } else if (e->name == "tan") {
                outer = fadd(make_number(1.0), fpow(make_call("tan", u), 2));
            } else if (e->name == "exp") {
                outer = e;
            } else if (e->name == "ln") {
                outer = fdiv(make_number(1.0), u);
            } else if (e->name == "sqrt") {
                outer = fdiv(make_number(1.0), fmul(make_number(2.0), e));
            } else if (e->name == "sinh") {
                outer = make_call("cosh", u);
            } else if (e->name == "cosh") {
                outer = make_call("sinh", u);
            } else if (e->name == "tanh") {
                outer = fsub(make_number(1.0), fpow(make_call("tanh", u), 2));
            } else if (e->name == "atan") {
                outer = fdiv(make_number(1.0), fadd(make_number(1.0), fpow(u, 2)));
            } else {
                throw std::invalid_argument("cannot differentiate unknown function '" + e->name +
                                            "'");
            }
            return fmul(outer, du);
        }
    }
    throw std::invalid_argument("corrupt expression node");
}

ComplexStructureField ComplexStructureField::make_standard(int n) {
    const int m = 2 * n;
    ComplexStructureField j;
    j.dim = m;
    j.standard = true;
    j.entries.assign(static_cast<std::size_t>(m) * m, make_number(0.0));
    ExprPtr one = make_number(1.0);
    ExprPtr minus_one = make_number(-1.0);
    for (int k = 0; k < n; ++k) {
        j.entries[static_cast<std::size_t>(n + k) * m + k] = one;        // J dx_k = dy_k
        j.entries[static_cast<std::size_t>(k) * m + (n + k)] = minus_one; // J dy_k = -dx_k
    }
    return j;
}

Eigen::MatrixXd ComplexStructureField::evaluate(const Eigen::VectorXd& point,
                                                const std::vector<std::string>& vars) const {
    Eigen::MatrixXd jm(dim, dim);
    std::map<std::string, double> bindings;
    for (std::size_t i = 0; i < vars.size(); ++i) bindings[vars[i]] = point[static_cast<int>(i)];
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            jm(i, j) = eval_value(*entry(i, j), bindings);
        }
    }
    return jm;
}

KahlerChart metric_from_kahler_potential(const ExprPtr& phi, int n, std::string name,
                                         std::optional<DomainBox> domain_hint,
                                         const Eigen::VectorXd* probe_point) {
    const int m = 2 * n;
    std::vector<std::string> vars;
    for (int i = 1; i <= m; ++i) vars.push_back("x" + std::to_string(i));

    // Hessian of the potential as expressions, shared across the pair (i,j).
    std::vector<ExprPtr> first(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) first[static_cast<std::size_t>(i)] = differentiate(phi, vars[static_cast<std::size_t>(i)]);
    std::vector<ExprPtr> hess(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            ExprPtr d = differentiate(first[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
            hess[static_cast<std::size_t>(i) * m + j] = d;
            hess[static_cast<std::size_t>(j) * m + i] = d;
        }
    }
    auto H = [&](int i, int j) { return hess[static_cast<std::size_t>(i) * m + j]; };

    ExprPtr quarter = make_number(0.25);
    // Real/imaginary blocks of the complex Hessian; A entries are shared
    // between the xx and yy blocks of the metric.
    std::vector<ExprPtr> a_block(static_cast<std::size_t>(n) * n);
    std::vector<ExprPtr> b_block(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            a_block[static_cast<std::size_t>(j) * n + k] =
                fmul(quarter, fadd(H(j, k), H(n + j, n + k)));
            b_block[static_cast<std::size_t>(j) * n + k] =
                fmul(quarter, fsub(H(j, n + k), H(n + j, k)));
        }
    }

    std::vector<ExprPtr> upper;
    upper.reserve(static_cast<std::size_t>(m) * (m + 1) / 2);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            ExprPtr entry;
            if (i < n && j < n) {
                entry = a_block[static_cast<std::size_t>(i) * n + j];
            } else if (i < n) {
                entry = b_block[static_cast<std::size_t>(i) * n + (j - n)];
            } else {
                entry = a_block[static_cast<std::size_t>(i - n) * n + (j - n)];
            }
            upper.push_back(std::move(entry));
        }
    }

    KahlerChart kc;
    kc.metric = MetricChart::from_upper(m, std::move(upper), std::move(name));
    kc.metric.domain_hint = domain_hint;
    kc.J = ComplexStructureField::make_standard(n);
    kc.potential = phi;

    Eigen::VectorXd probe = probe_point ? *probe_point : Eigen::VectorXd::Zero(m);
    if (domain_hint && !probe_point) probe = 0.5 * (domain_hint->lo + domain_hint->hi);
    connection_at(kc.metric, probe); // throws if the metric is not SPD there
    return kc;
}

CheckVerdict kahler_verify_at(const KahlerChart& kc, const CurvatureData& cd,
                              double tol_exact, double tol_fd) {
    const int m = kc.dim();
    const Eigen::MatrixXd jm = kc.j_at(cd.point);

    const double r_square = (jm * jm + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    const double r_compat = (jm.transpose() * cd.g * jm - cd.g).cwiseAbs().maxCoeff();

    // (nabla_a J)^i_j = d_a J^i_j + Gamma^i_ak J^k_j - Gamma^k_aj J^i_k
    double r_parallel = 0.0;
    Tensor3 dj(m); // dj(a, i, j) = d_a J^i_j
    if (!kc.J.standard) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                Jet2 jet = eval_jet(*kc.J.entry(i, j), cd.point, kc.metric.var_order());
                for (int a = 0; a < m; ++a) dj(a, i, j) = jet.grad[a];
            }
        }
    }
    for (int a = 0; a < m; ++a) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double v = dj(a, i, j);
                for (int k = 0; k < m; ++k) {
                    v += cd.christoffel(i, a, k) * jm(k, j) - cd.christoffel(k, a, j) * jm(i, k);
                }
                r_parallel = std::max(r_parallel, std::abs(v));
            }
        }
    }

    CheckVerdict v;
    v.check = "kahler-verify";
    v.defect = std::max({r_square, r_compat, r_parallel});
    v.tol = std::max(tol_exact, tol_fd);
    v.pass = r_square <= tol_exact && r_compat <= tol_exact && r_parallel <= tol_fd;
    v.details.emplace_back("j_square_residual", r_square);
    v.details.emplace_back("compatibility_residual", r_compat);
    v.details.emplace_back("parallel_j_residual", r_parallel);
    return v;
}

double holomorphic_sectional_at(const KahlerChart& kc, const CurvatureData& cd,
                                const Eigen::VectorXd& X) {
    const double xx = cd.inner(X, X);
    if (!(xx > 0.0)) throw std::invalid_argument("holomorphic sectional curvature of a zero vector");
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    const Eigen::VectorXd JX = jm * X;
    return riemann_inner(cd, X, JX, JX, X) / (xx * xx);
}

std::vector<Eigen::VectorXd> sample_j_pairs(const CurvatureData& cd, const Eigen::MatrixXd& jm,
                                            int pairs, std::mt19937_64& rng) {
    const int m = cd.dim();
    if (2 * pairs > m) {
        throw std::invalid_argument("not enough dimensions for the requested J-pairs");
    }
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Eigen::VectorXd> basis;     // X, JX, Y, JY, ...
    std::vector<Eigen::VectorXd> generators; // X, Y, Z, ...
    for (int p = 0; p < pairs; ++p) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            Eigen::VectorXd v(m);
            for (int i = 0; i < m; ++i) v[i] = gauss(rng);
            for (const auto& e : basis) v -= cd.inner(e, v) * e;
            const double norm = cd.norm(v);
            if (norm < 1e-6) continue;
            v /= norm;
            // J of a unit vector orthogonal to every previous pair is again
            // unit and orthogonal to all of them, so the pair extends the set.
            Eigen::VectorXd jv = jm * v;
            generators.push_back(v);
            basis.push_back(std::move(v));
            basis.push_back(std::move(jv));
            break;
        }
        if (static_cast<int>(generators.size()) != p + 1) {
            throw GeometryError("failed to sample an orthonormal J-pair set");
        }
    }
    return generators;
}

namespace {

void require_orthonormal(const CurvatureData& cd, const std::vector<Eigen::VectorXd>& vecs,
                         double tol) {
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        for (std::size_t j = i; j < vecs.size(); ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(cd.inner(vecs[i], vecs[j]) - target) > tol) {
                throw std::invalid_argument("input vectors are not orthonormal at this point");
            }
        }
    }
}

} // namespace

CheckVerdict xy_check_at(const KahlerChart& kc, const CurvatureData& cd, int samples,
                         std::uint64_t seed, double tol) {
    const int m = kc.dim();
    if (m < 4) throw std::invalid_argument("xy check needs real dimension >= 4");
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    std::mt19937_64 rng(seed);

    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto gen = sample_j_pairs(cd, jm, 2, rng);
        const Eigen::VectorXd& X = gen[0];
        const Eigen::VectorXd& Y = gen[1];
        const Eigen::VectorXd JX = jm * X;
        const Eigen::VectorXd JY = jm * Y;
        const double lhs = riemann_inner(cd, X, JX, Y, JX);
        const double rhs = riemann_inner(cd, Y, JY, X, JY);
        defect = std::max(defect, std::abs(lhs - rhs));
    }

    CheckVerdict v;
    v.check = "xy";
    v.defect = defect;
    v.tol = tol * (1.0 + cd.max_abs_riemann);
    v.pass = defect <= v.tol;
    return v;
}

std::array<double, 3> xy_equivalences_at(const KahlerChart& kc, const CurvatureData& cd,
                                         const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    const Eigen::VectorXd JX = jm * X;
    const Eigen::VectorXd JY = jm * Y;
    require_orthonormal(cd, {X, JX, Y, JY}, 1e-10);

    const double a = riemann_inner(cd, X, JX, Y, JX) - riemann_inner(cd, Y, JY, X, JY);
    const double b = riemann_inner(cd, X, JX, Y, X) + riemann_inner(cd, Y, JY, X, Y);
    const double c = riemann_inner(cd, X, Y, X, JY);
    return {a, b, c};
}

CheckVerdict kahler_identity_suite_at(const KahlerChart& kc, const CurvatureData& cd,
                                      int samples, std::uint64_t seed, double tol) {
    const int m = kc.dim();
    if (m < 4) throw std::invalid_argument("kahler identity suite needs real dimension >= 4");
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double r_jinv = 0.0;
    double r_trade = 0.0;
    double r_polar = 0.0;
    double r_bianchi = 0.0;
    const bool sextuples = m >= 6;

    for (int s = 0; s < samples; ++s) {
        // J-invariance on unit-normalized random vectors.
        std::vector<Eigen::VectorXd> r4;
        for (int k = 0; k < 4; ++k) {
            Eigen::VectorXd v(m);
            for (int i = 0; i < m; ++i) v[i] = gauss(rng);
            v /= cd.norm(v);
            r4.push_back(std::move(v));
        }
        r_jinv = std::max(r_jinv,
                          std::abs(riemann_inner(cd, r4[0], r4[1], jm * r4[2], jm * r4[3]) -
                                   riemann_inner(cd, r4[0], r4[1], r4[2], r4[3])));

        auto gen = sample_j_pairs(cd, jm, sextuples ? 3 : 2, rng);
        const Eigen::VectorXd& X = gen[0];
        const Eigen::VectorXd& Y = gen[1];
        const Eigen::VectorXd JX = jm * X;
        const Eigen::VectorXd JY = jm * Y;

        r_trade = std::max(r_trade, std::abs(riemann_inner(cd, Y, X, X, JY) -
                                             riemann_inner(cd, Y, X, Y, JX)));

        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const Eigen::VectorXd A = inv_sqrt2 * (X + Y);
        const Eigen::VectorXd B = inv_sqrt2 * (X - Y);
        const Eigen::VectorXd JA = jm * A;
        const Eigen::VectorXd JB = jm * B;
        r_polar = std::max(r_polar,
                           std::abs(4.0 * riemann_inner(cd, X, Y, X, JY) -
                                    2.0 * (riemann_inner(cd, A, JA, B, A) +
                                           riemann_inner(cd, B, JB, A, B))));

        if (sextuples) {
            const Eigen::VectorXd& Z = gen[2];
            const Eigen::VectorXd JZ = jm * Z;
            r_bianchi = std::max(r_bianchi,
                                 std::abs(riemann_inner(cd, Z, JZ, X, JY) -
                                          riemann_inner(cd, Y, Z, X, Z) -
                                          riemann_inner(cd, Y, JZ, X, JZ)));
        }
    }

    CheckVerdict v;
    v.check = "kahler-identities";
    v.defect = std::max({r_jinv, r_trade, r_polar, r_bianchi});
    v.tol = tol * (1.0 + cd.max_abs_riemann);
    v.pass = v.defect <= v.tol;
    v.details.emplace_back("j_invariance", r_jinv);
    v.details.emplace_back("pair_trade", r_trade);
    v.details.emplace_back("polarization", r_polar);
    if (sextuples) {
        v.details.emplace_back("bianchi_split", r_bianchi);
    } else {
        // Sub-identity needs three J-pairs; flag it without skipping the row.
        v.details.emplace_back("bianchi_split_skipped", 1.0);
    }
    return v;
}

CheckVerdict prop52_chain_at(const KahlerChart& kc, const CurvatureData& cd,
                             const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                             const Eigen::VectorXd& Z, double tol, std::uint64_t seed) {
    const int m = kc.dim();
    if (m < 6) throw std::invalid_argument("four-term chain needs real dimension >= 6");

    CheckVerdict gate = kahler_verify_at(kc, cd, 1e-8, 1e-6);
    if (!gate.pass) {
        throw GeometryError("chart fails the kahler conditions at this point; chain not defined");
    }

    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    const Eigen::VectorXd JX = jm * X;
    const Eigen::VectorXd JY = jm * Y;
    const Eigen::VectorXd JZ = jm * Z;
    require_orthonormal(cd, {X, JX, Y, JY, Z, JZ}, 1e-10);

    CheckVerdict v;
    v.check = "prop52-chain";
    v.tol = tol * (1.0 + cd.max_abs_riemann);

    CheckVerdict xy = xy_check_at(kc, cd, 64, seed, std::max(tol, 1e-8));
    if (!xy.pass) {
        v.skipped = "chart is not pointwise xy-symmetric here (defect " +
                    std::to_string(xy.defect) + "); chain is not a theorem for it";
        v.defect = 0.0;
        v.pass = false;
        return v;
    }

    const double q1 = riemann_inner(cd, X, JX, Y, JX);
    const double q2 = 2.0 * riemann_inner(cd, Z, JZ, X, JY);
    const double q3 = 4.0 * riemann_inner(cd, Z, X, Z, Y);
    const double q4 = 4.0 * riemann_inner(cd, JZ, X, JZ, Y);

    // Independence of the choice of Z: rebuild one deterministically from the
    // coordinate basis, orthogonal to the sampled span.
    std::vector<Eigen::VectorXd> span = {X, JX, Y, JY};
    Eigen::VectorXd z2;
    for (int cand = m - 1; cand >= 0; --cand) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(m, cand);
        for (const auto& e : span) w -= cd.inner(e, w) * e;
        const double norm = cd.norm(w);
        if (norm > 1e-6 && std::abs(cd.inner(w / norm, Z)) < 0.99) {
            z2 = w / norm;
            break;
        }
    }
    if (z2.size() == 0) throw GeometryError("could not build an independent Z choice");
    const double q3_alt = 4.0 * riemann_inner(cd, z2, X, z2, Y);

    v.defect = std::max({std::abs(q1 - q2), std::abs(q2 - q3), std::abs(q3 - q4),
                         std::abs(q3 - q3_alt)});
    v.pass = v.defect <= v.tol;
    v.details.emplace_back("q1_xjxy_jx", q1);
    v.details.emplace_back("q2_zjzx_jy", q2);
    v.details.emplace_back("q3_zxzy", q3);
    v.details.emplace_back("q4_jzxjzy", q4);
    v.details.emplace_back("z_independence", std::abs(q3 - q3_alt));
    return v;
}

CheckVerdict prop52_chain_sampled(const KahlerChart& kc, const CurvatureData& cd,
                                  int samples, std::uint64_t seed, double tol) {
    const int m = kc.dim();
    if (m < 6) throw std::invalid_argument("four-term chain needs real dimension >= 6");
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    std::mt19937_64 rng(seed);

    CheckVerdict out;
    out.check = "prop52-chain";
    out.tol = tol * (1.0 + cd.max_abs_riemann);
    out.defect = 0.0;

    for (int s = 0; s < samples; ++s) {
        auto gen = sample_j_pairs(cd, jm, 3, rng);
        CheckVerdict one = prop52_chain_at(kc, cd, gen[0], gen[1], gen[2], tol, seed + 1);
        if (one.skipped) return one;
        out.defect = std::max(out.defect, one.defect);
        if (s == 0) out.details = one.details;
    }
    out.pass = out.defect <= out.tol;
    return out;
}

CheckVerdict constant_hol_curvature_check_at(const KahlerChart& kc, const CurvatureData& cd,
                                             int samples, std::uint64_t seed, double tol) {
    const int m = kc.dim();
    if (m < 4) throw std::invalid_argument("constant-hol-curvature check needs dimension >= 4");
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    std::mt19937_64 rng(seed);

    double defect = 0.0;
    double measured = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto gen = sample_j_pairs(cd, jm, 2, rng);
        const Eigen::VectorXd& X = gen[0];
        const Eigen::VectorXd& Y = gen[1];
        const Eigen::VectorXd JX = jm * X;
        defect = std::max(defect, std::abs(riemann_inner(cd, X, JX, Y, JX)));
        defect = std::max(defect, std::abs(riemann_inner(cd, X, JX, Y, X)));
        if (s == 0) measured = holomorphic_sectional_at(kc, cd, X);
    }

    CheckVerdict v;
    v.check = "constant-hol-curvature";
    v.defect = defect;
    v.tol = tol * (1.0 + cd.max_abs_riemann);
    v.pass = defect <= v.tol;
    if (v.pass) v.details.emplace_back("holomorphic_curvature", measured);
    return v;
}

std::array<double, 6> eq_0xy_0z_probe(const KahlerChart& kc, const CurvatureData& cd,
                                      const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                      const Eigen::VectorXd& Z, std::uint64_t seed) {
    CheckVerdict gate = constant_hol_curvature_check_at(kc, cd, 64, seed, 1e-6);
    if (!gate.pass) {
        throw GeometryError(
            "probe requires constant holomorphic sectional curvature at the point");
    }
    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    const Eigen::VectorXd JX = jm * X;
    const Eigen::VectorXd JY = jm * Y;
    const Eigen::VectorXd JZ = jm * Z;
    require_orthonormal(cd, {X, JX, Y, JY}, 1e-8);
    for (const auto* v : {&X, &JX, &Y, &JY}) {
        if (std::abs(cd.inner(*v, Z)) > 1e-8) {
            throw std::invalid_argument("Z must be orthogonal to span(X, JX, Y, JY)");
        }
    }
    if (std::abs(cd.inner(Z, Z) - 1.0) > 1e-8) {
        throw std::invalid_argument("Z must be a unit vector");
    }

    return {riemann_inner(cd, X, JX, Y, JX), riemann_inner(cd, X, JX, Y, X),
            riemann_inner(cd, X, Y, X, JY),  riemann_inner(cd, Z, X, Z, Y),
            riemann_inner(cd, JZ, X, JZ, Y), riemann_inner(cd, Z, JX, Z, Y)};
}

CheckVerdict antiholomorphic_flatness_probe(const KahlerChart& kc, const CurvatureData& cd,
                                            int samples, std::uint64_t seed, double tol) {
    const int m = kc.dim();
    if (m < 8) throw std::invalid_argument("antiholomorphic flatness probe needs dimension >= 8");

    CheckVerdict v;
    v.check = "antiholomorphic-flatness";
    v.tol = tol * (1.0 + cd.max_abs_riemann);

    CheckVerdict gate = constant_hol_curvature_check_at(kc, cd, 64, seed, 1e-6);
    if (!gate.pass) {
        v.skipped = "chart does not have constant holomorphic curvature at the point";
        v.pass = false;
        return v;
    }

    const Eigen::MatrixXd jm = kc.j_at(cd.point);
    std::mt19937_64 rng(seed);
    double defect = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto gen = sample_j_pairs(cd, jm, 4, rng); // X, Y, Z, W spanning an antiholomorphic frame
        defect = std::max(defect, std::abs(riemann_inner(cd, gen[0], gen[1], gen[2], gen[3])));
    }
    v.defect = defect;
    v.pass = defect <= v.tol;
    return v;
}

} // namespace curv
