#include "curv/riemann.hpp"

#include "curv/jet.hpp"

#include <cmath>

namespace curv {

namespace {

std::vector<std::string> chart_vars(int dim) {
    std::vector<std::string> vars;
    vars.reserve(static_cast<std::size_t>(dim));
    for (int i = 1; i <= dim; ++i) vars.push_back("x" + std::to_string(i));
    return vars;
}

std::size_t upper_index(int dim, int i, int j) {
    // row-major upper triangle, i <= j
    return static_cast<std::size_t>(i) * dim - static_cast<std::size_t>(i) * (i - 1) / 2 +
           static_cast<std::size_t>(j - i);
}

/// Jets of every metric entry -> (g, dg, d2g) plus SPD-checked inverse.
void metric_jets(const MetricChart& chart, const Eigen::VectorXd& point,
                 kernels::MetricDerivatives& md, Eigen::MatrixXd& g_inv,
                 double max_condition) {
    const int m = chart.dim();
    if (point.size() != m) {
        throw std::invalid_argument("point dimension does not match chart '" + chart.name() + "'");
    }

    md.m = m;
    md.g = Eigen::MatrixXd::Zero(m, m);
    md.dg = Tensor3(m);
    md.d2g.assign(static_cast<std::size_t>(m) * m, Eigen::MatrixXd::Zero(m, m));

    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            Jet2 jet = eval_jet(*chart.entry(i, j), point, chart.var_order());
            md.g(i, j) = jet.value;
            md.g(j, i) = jet.value;
            for (int a = 0; a < m; ++a) {
                md.dg(a, i, j) = jet.grad[a];
                md.dg(a, j, i) = jet.grad[a];
                for (int b = 0; b < m; ++b) {
                    md.d2g[static_cast<std::size_t>(a) * m + b](i, j) = jet.hess(a, b);
                    md.d2g[static_cast<std::size_t>(a) * m + b](j, i) = jet.hess(a, b);
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md.g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
        throw GeometryError("metric is not positive definite at the requested point (chart '" +
                            chart.name() + "')");
    }
    if (hi / lo > max_condition) {
        throw GeometryError("metric is too ill-conditioned to invert reliably (chart '" +
                            chart.name() + "')");
    }
    g_inv = md.g.inverse();
}

} // namespace

MetricChart MetricChart::from_upper(int dim, std::vector<ExprPtr> upper, std::string name) {
    if (static_cast<int>(upper.size()) != dim * (dim + 1) / 2) {
        throw std::invalid_argument("upper-triangle entry count does not match dimension");
    }
    MetricChart c;
    c.dim_ = dim;
    c.name_ = std::move(name);
    c.upper_ = std::move(upper);
    c.vars_ = chart_vars(dim);
    return c;
}

MetricChart MetricChart::from_strings(int dim,
                                      const std::vector<std::vector<std::string>>& entries,
                                      std::string name) {
    if (static_cast<int>(entries.size()) != dim) {
        throw std::invalid_argument("metric entry matrix has wrong row count");
    }
    const auto vars = chart_vars(dim);
    std::vector<ExprPtr> upper;
    upper.reserve(static_cast<std::size_t>(dim) * (dim + 1) / 2);
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(entries[static_cast<std::size_t>(i)].size()) != dim) {
            throw std::invalid_argument("metric entry matrix has wrong column count");
        }
        for (int j = i; j < dim; ++j) {
            const std::string& upper_src = entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            const std::string& lower_src = entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            if (upper_src != lower_src) {
                throw std::invalid_argument("metric entries (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) +
                                            ") and transpose differ textually");
            }
            upper.push_back(parse(upper_src, vars));
        }
    }
    return from_upper(dim, std::move(upper), std::move(name));
}

MetricChart MetricChart::diagonal(int dim, std::vector<ExprPtr> diag, std::string name) {
    if (static_cast<int>(diag.size()) != dim) {
        throw std::invalid_argument("diagonal entry count does not match dimension");
    }
    std::vector<ExprPtr> upper;
    ExprPtr zero = make_number(0.0);
    for (int i = 0; i < dim; ++i) {
        upper.push_back(diag[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < dim; ++j) upper.push_back(zero);
    }
    return from_upper(dim, std::move(upper), std::move(name));
}

const ExprPtr& MetricChart::entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    return upper_[upper_index(dim_, i, j)];
}

ConnectionData connection_at(const MetricChart& chart, const Eigen::VectorXd& point) {
    kernels::MetricDerivatives md;
    ConnectionData cn;
    metric_jets(chart, point, md, cn.g_inv, 1e12);
    cn.point = point;
    cn.g = md.g;
    cn.dg = md.dg;
    cn.christoffel = kernels::christoffel(md, cn.g_inv);
    return cn;
}

CurvatureData curvature_at(const MetricChart& chart, const Eigen::VectorXd& point,
                           const CurvatureOptions& opts) {
    kernels::MetricDerivatives md;
    CurvatureData cd;
    metric_jets(chart, point, md, cd.g_inv, opts.max_condition);
    cd.point = point;
    cd.g = md.g;
    cd.dg = md.dg;
    cd.christoffel = kernels::christoffel(md, cd.g_inv);
    cd.riemann = kernels::riemann(md, cd.g_inv, cd.christoffel, opts.parallel_kernel);
    cd.riemann_up = kernels::raise_last_index(cd.riemann, cd.g_inv, opts.parallel_kernel);
    cd.max_abs_riemann = cd.riemann.max_abs();
    return cd;
}

double riemann_inner(const CurvatureData& cd, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& z) {
    const int m = cd.dim();
    if (u.size() != m || v.size() != m || w.size() != m || z.size() != m) {
        throw std::invalid_argument("vector dimension mismatch in curvature contraction");
    }
    double total = 0.0;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const double uv = u[a] * v[b] - u[b] * v[a];
            if (uv == 0.0) continue;
            double inner = 0.0;
            for (int c = 0; c < m; ++c) {
                for (int d = c + 1; d < m; ++d) {
                    const double wz = w[c] * z[d] - w[d] * z[c];
                    if (wz == 0.0) continue;
                    inner += cd.riemann(a, b, c, d) * wz;
                }
            }
            total += uv * inner;
        }
    }
    return total;
}

Eigen::VectorXd curvature_action(const CurvatureData& cd, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    const int m = cd.dim();
    if (u.size() != m || v.size() != m || w.size() != m) {
        throw std::invalid_argument("vector dimension mismatch in curvature action");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const double uv = u[a] * v[b] - u[b] * v[a];
            if (uv == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                if (w[c] == 0.0) continue;
                for (int d = 0; d < m; ++d) {
                    out[d] += uv * w[c] * cd.riemann_up(a, b, c, d);
                }
            }
        }
    }
    return out;
}

double sectional(const CurvatureData& cd, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double uu = cd.inner(u, u);
    const double vv = cd.inner(v, v);
    const double uvp = cd.inner(u, v);
    const double den = uu * vv - uvp * uvp;
    if (den <= 1e-14 * std::max(1.0, uu * vv)) {
        throw GeometryError("sectional curvature of a degenerate plane");
    }
    return riemann_inner(cd, u, v, v, u) / den;
}

double ricci(const CurvatureData& cd, const Eigen::VectorXd& w, const Eigen::VectorXd& eta) {
    const int m = cd.dim();
    if (w.size() != m || eta.size() != m) {
        throw std::invalid_argument("vector dimension mismatch in ricci");
    }
    // Ric(w, eta) = -sum_i <R(v_i, w) v_i, eta> over any orthonormal (v_i),
    // i.e. -g^ac R_abcd w^b eta^d.
    double sum = 0.0;
    for (int a = 0; a < m; ++a) {
        for (int c = 0; c < m; ++c) {
            const double gac = cd.g_inv(a, c);
            if (gac == 0.0) continue;
            double inner = 0.0;
            for (int b = 0; b < m; ++b) {
                if (w[b] == 0.0) continue;
                for (int d = 0; d < m; ++d) {
                    inner += cd.riemann(a, b, c, d) * w[b] * eta[d];
                }
            }
            sum += gac * inner;
        }
    }
    return -sum;
}

CheckVerdict einstein_check_at(const CurvatureData& cd, double tol) {
    const int m = cd.dim();
    const auto frame = orthonormal_frame(cd.g);

    Eigen::MatrixXd ric(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            ric(i, j) = ricci(cd, frame[static_cast<std::size_t>(i)], frame[static_cast<std::size_t>(j)]);
            ric(j, i) = ric(i, j);
        }
    }
    const double rho = ric.trace() / m;

    double defect = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double target = (i == j) ? rho : 0.0;
            defect = std::max(defect, std::abs(ric(i, j) - target));
        }
    }

    CheckVerdict v;
    v.check = "einstein";
    v.defect = defect;
    v.tol = tol;
    v.pass = defect <= tol;
    v.details.emplace_back("rho", rho);
    return v;
}

CheckVerdict constant_curvature_check_at(const CurvatureData& cd, double tol) {
    const int m = cd.dim();
    if (m < 2) throw std::invalid_argument("constant-curvature check needs dimension >= 2");
    const auto frame = orthonormal_frame(cd.g);
    const double rho = sectional(cd, frame[0], frame[1]);

    double defect = 0.0;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                for (int d = 0; d < m; ++d) {
                    const double model =
                        rho * (cd.g(a, d) * cd.g(b, c) - cd.g(a, c) * cd.g(b, d));
                    defect = std::max(defect, std::abs(cd.riemann(a, b, c, d) - model));
                }
            }
        }
    }

    CheckVerdict v;
    v.check = "constant-curvature";
    v.defect = defect;
    v.tol = tol * std::max({1.0, std::abs(rho), cd.max_abs_riemann});
    v.pass = defect <= v.tol;
    v.details.emplace_back("rho", rho);
    return v;
}

std::vector<Eigen::VectorXd> gram_schmidt(const std::vector<Eigen::VectorXd>& vectors,
                                          const Eigen::MatrixXd& g, Eigen::MatrixXd* coeff) {
    const int n = static_cast<int>(vectors.size());
    if (n == 0) return {};
    const auto dim = vectors.front().size();

    double scale = 0.0;
    for (const auto& v : vectors) scale = std::max(scale, std::sqrt(std::abs(v.dot(g * v))));
    if (scale == 0.0) scale = 1.0;

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::VectorXd> frame;
    frame.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        if (vectors[static_cast<std::size_t>(i)].size() != dim) {
            throw std::invalid_argument("gram_schmidt: inconsistent vector dimensions");
        }
        Eigen::VectorXd w = vectors[static_cast<std::size_t>(i)];
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        row[i] = 1.0;
        for (int j = 0; j < i; ++j) {
            const double proj = frame[static_cast<std::size_t>(j)].dot(g * w);
            w -= proj * frame[static_cast<std::size_t>(j)];
            row -= proj * c.row(j).transpose();
        }
        const double norm = std::sqrt(std::max(0.0, w.dot(g * w)));
        if (norm <= 1e-12 * scale) {
            throw GeometryError("gram_schmidt: input vectors are rank deficient");
        }
        w /= norm;
        row /= norm;
        c.row(i) = row.transpose();
        frame.push_back(std::move(w));
    }
    if (coeff) *coeff = c;
    return frame;
}

std::vector<Eigen::VectorXd> orthonormal_frame(const Eigen::MatrixXd& g) {
    const int m = static_cast<int>(g.rows());
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        basis.push_back(Eigen::VectorXd::Unit(m, i));
    }
    return gram_schmidt(basis, g);
}

} // namespace curv
