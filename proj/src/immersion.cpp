#include "curv/immersion.hpp"

#include "curv/jet.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace curv {

namespace {

std::vector<std::string> param_vars(int r) {
    std::vector<std::string> vars;
    for (int i = 1; i <= r; ++i) vars.push_back("u" + std::to_string(i));
    return vars;
}

} // namespace

ImmersionChart ImmersionChart::make(int domain_dim, std::vector<ExprPtr> components,
                                    std::shared_ptr<const Ambient> ambient, std::string name) {
    if (!ambient) throw std::invalid_argument("immersion needs an ambient chart");
    if (static_cast<int>(components.size()) != ambient->metric().dim()) {
        throw std::invalid_argument("immersion component count must match the ambient dimension");
    }
    if (domain_dim < 1 || domain_dim > ambient->metric().dim()) {
        throw std::invalid_argument("immersion domain dimension out of range");
    }
    ImmersionChart im;
    im.domain_dim = domain_dim;
    im.components = std::move(components);
    im.ambient = std::move(ambient);
    im.name = std::move(name);
    im.vars_ = param_vars(domain_dim);
    return im;
}

ImmersionChart ImmersionChart::from_strings(int domain_dim,
                                            const std::vector<std::string>& components,
                                            std::shared_ptr<const Ambient> ambient,
                                            std::string name) {
    const auto vars = param_vars(domain_dim);
    std::vector<ExprPtr> parsed;
    parsed.reserve(components.size());
    for (const auto& src : components) parsed.push_back(parse(src, vars));
    return make(domain_dim, std::move(parsed), std::move(ambient), std::move(name));
}

double fd_step(double coordinate) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    return base * std::max(1.0, std::abs(coordinate));
}

ImmersionFrame frame_at(const ImmersionChart& im, const Eigen::VectorXd& u) {
    const int r = im.domain_dim;
    const int m = im.ambient_dim();
    if (u.size() != r) throw std::invalid_argument("parameter point has wrong dimension");

    ImmersionFrame fr;
    fr.u = u;
    fr.p = Eigen::VectorXd(m);
    fr.jacobian = Eigen::MatrixXd(m, r);
    fr.component_hessians.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Jet2 jet = eval_jet(*im.components[static_cast<std::size_t>(i)], u, im.var_order());
        fr.p[i] = jet.value;
        fr.jacobian.row(i) = jet.grad.transpose();
        fr.component_hessians.push_back(jet.hess);
    }

    fr.ambient_conn = connection_at(im.ambient->metric(), fr.p);
    const Eigen::MatrixXd& g = fr.ambient_conn.g;

    fr.induced_g = fr.jacobian.transpose() * g * fr.jacobian;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fr.induced_g);
    if (!(es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()))) {
        throw GeometryError("immersion '" + im.name + "' has a rank-deficient jacobian");
    }

    std::vector<Eigen::VectorXd> cols;
    cols.reserve(static_cast<std::size_t>(r));
    for (int a = 0; a < r; ++a) cols.push_back(fr.jacobian.col(a));
    fr.tangent_frame = gram_schmidt(cols, g, &fr.gs_coeff);

    Eigen::MatrixXd tangent_proj = Eigen::MatrixXd::Zero(m, m);
    for (const auto& e : fr.tangent_frame) tangent_proj += e * (g * e).transpose();
    fr.normal_projector = Eigen::MatrixXd::Identity(m, m) - tangent_proj;

    // alpha in the coordinate basis: normal part of d_a d_b f + Gamma(df, df).
    const Tensor3& gamma = fr.ambient_conn.christoffel;
    fr.alpha_coord.assign(static_cast<std::size_t>(r),
                          std::vector<Eigen::VectorXd>(static_cast<std::size_t>(r)));
    for (int a = 0; a < r; ++a) {
        for (int b = a; b < r; ++b) {
            Eigen::VectorXd d(m);
            for (int i = 0; i < m; ++i) {
                double v = fr.component_hessians[static_cast<std::size_t>(i)](a, b);
                for (int j = 0; j < m; ++j) {
                    for (int k = 0; k < m; ++k) {
                        v += gamma(i, j, k) * fr.jacobian(j, a) * fr.jacobian(k, b);
                    }
                }
                d[i] = v;
            }
            Eigen::VectorXd normal = fr.normal_projector * d;
            fr.alpha_coord[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = normal;
            fr.alpha_coord[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = normal;
        }
    }

    fr.alpha.assign(static_cast<std::size_t>(r),
                    std::vector<Eigen::VectorXd>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i) {
        for (int j = i; j < r; ++j) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
            for (int a = 0; a < r; ++a) {
                const double ci = fr.gs_coeff(i, a);
                if (ci == 0.0) continue;
                for (int b = 0; b < r; ++b) {
                    const double cj = fr.gs_coeff(j, b);
                    if (cj == 0.0) continue;
                    sum += ci * cj * fr.alpha_coord[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                }
            }
            fr.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sum;
            fr.alpha[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = sum;
        }
    }

    fr.mean_curvature = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < r; ++i) {
        fr.mean_curvature += fr.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    fr.mean_curvature /= static_cast<double>(r);
    return fr;
}

namespace {

void check_frame_matches(const ImmersionFrame& fr, const CurvatureData& cd) {
    if (cd.dim() != fr.ambient_dim()) {
        throw std::invalid_argument("curvature data dimension does not match the frame");
    }
}

} // namespace

CheckVerdict special_check_at(const ImmersionFrame& fr, const CurvatureData& cd, double tol) {
    check_frame_matches(fr, cd);
    const int r = fr.domain_dim();

    double defect = 0.0;
    for (int j = 0; j < r; ++j) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(fr.ambient_dim());
        for (int i = 0; i < r; ++i) {
            sum += curvature_action(cd, fr.tangent_frame[static_cast<std::size_t>(i)],
                                    fr.tangent_frame[static_cast<std::size_t>(j)],
                                    fr.tangent_frame[static_cast<std::size_t>(i)]);
        }
        defect = std::max(defect, fr.norm_g(fr.normal_projector * sum));
    }

    CheckVerdict v;
    v.check = "special";
    v.defect = defect;
    v.tol = tol * (1.0 + cd.max_abs_riemann);
    v.pass = defect <= v.tol;
    return v;
}

CheckVerdict very_special_check_at(const ImmersionFrame& fr, const CurvatureData& cd,
                                   double tol) {
    check_frame_matches(fr, cd);
    const int r = fr.domain_dim();

    double defect = 0.0;
    for (int k = 0; k < r; ++k) {
        const Eigen::VectorXd& w = fr.tangent_frame[static_cast<std::size_t>(k)];
        for (int i = 0; i < r; ++i) {
            for (int j = i; j < r; ++j) {
                Eigen::VectorXd b =
                    curvature_action(cd, fr.tangent_frame[static_cast<std::size_t>(i)], w,
                                     fr.tangent_frame[static_cast<std::size_t>(j)]) +
                    curvature_action(cd, fr.tangent_frame[static_cast<std::size_t>(j)], w,
                                     fr.tangent_frame[static_cast<std::size_t>(i)]);
                defect = std::max(defect, fr.norm_g(fr.normal_projector * b));
            }
        }
    }

    CheckVerdict v;
    v.check = "very-special";
    v.defect = defect;
    v.tol = tol * (1.0 + cd.max_abs_riemann);
    v.pass = defect <= v.tol;
    return v;
}

CheckVerdict umbilical_check_at(const ImmersionFrame& fr, double tol) {
    const int r = fr.domain_dim();
    double defect = 0.0;
    double scale = 0.0;
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            const Eigen::VectorXd& a = fr.alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            scale = std::max(scale, fr.norm_g(a));
            Eigen::VectorXd diff = a;
            if (i == j) diff -= fr.mean_curvature;
            defect = std::max(defect, fr.norm_g(diff));
        }
    }

    CheckVerdict v;
    v.check = "umbilical";
    v.defect = defect;
    v.tol = tol * (1.0 + scale);
    v.pass = defect <= v.tol;
    v.details.emplace_back("alpha_scale", scale);
    return v;
}

Eigen::VectorXd normal_derivative_H(const ImmersionChart& im, const Eigen::VectorXd& u,
                                    int direction, double h) {
    const int r = im.domain_dim;
    if (direction < 0 || direction >= r) {
        throw std::invalid_argument("direction index out of range");
    }
    if (h == 0.0) h = fd_step(u[direction]);
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step underflow");

    ImmersionFrame base = frame_at(im, u);
    Eigen::VectorXd up = u, dn = u;
    up[direction] += h;
    dn[direction] -= h;
    ImmersionFrame fp = frame_at(im, up);
    ImmersionFrame fm = frame_at(im, dn);

    const int m = im.ambient_dim();
    Eigen::VectorXd d = (fp.mean_curvature - fm.mean_curvature) / (2.0 * h);
    const Tensor3& gamma = base.ambient_conn.christoffel;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                d[i] += gamma(i, j, k) * base.jacobian(j, direction) * base.mean_curvature[k];
            }
        }
    }
    return base.normal_projector * d;
}

CheckVerdict extrinsic_sphere_check_at(const ImmersionChart& im, const Eigen::VectorXd& u,
                                       double tol_exact, double tol_fd) {
    ImmersionFrame fr = frame_at(im, u);
    CheckVerdict umb = umbilical_check_at(fr, tol_exact);

    double max_dh = 0.0;
    for (int a = 0; a < im.domain_dim; ++a) {
        max_dh = std::max(max_dh, fr.norm_g(normal_derivative_H(im, u, a)));
    }

    CheckVerdict v;
    v.check = "extrinsic-sphere";
    v.defect = max_dh;
    v.tol = tol_fd;
    v.pass = umb.pass && max_dh <= tol_fd;
    v.details.emplace_back("umbilical_defect", umb.defect);
    v.details.emplace_back("umbilical_tol", umb.tol);
    v.details.emplace_back("normal_h_derivative", max_dh);
    return v;
}

CheckVerdict codazzi_residual_at(const ImmersionChart& im, const Eigen::VectorXd& u,
                                 double tol_fd, double h_in) {
    const int r = im.domain_dim;
    if (r < 2) throw std::invalid_argument("codazzi residual needs domain dimension >= 2");
    const int m = im.ambient_dim();

    ImmersionFrame fr = frame_at(im, u);
    CurvatureData cd = curvature_at(im.ambient->metric(), fr.p);

    // Induced metric derivatives and Christoffels from the chain rule.
    Tensor3 dG(r);
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            for (int c = 0; c < r; ++c) {
                double v = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double fka = fr.jacobian(k, a);
                    if (fka == 0.0) continue;
                    for (int i = 0; i < m; ++i) {
                        for (int j = 0; j < m; ++j) {
                            v += fr.ambient_conn.dg(k, i, j) * fka * fr.jacobian(i, b) *
                                 fr.jacobian(j, c);
                        }
                    }
                }
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        v += fr.ambient_conn.g(i, j) *
                             (fr.component_hessians[static_cast<std::size_t>(i)](a, b) * fr.jacobian(j, c) +
                              fr.jacobian(i, b) * fr.component_hessians[static_cast<std::size_t>(j)](a, c));
                    }
                }
                dG(a, b, c) = v;
            }
        }
    }
    Eigen::MatrixXd G_inv = fr.induced_g.inverse();
    Tensor3 lambda(r);
    for (int d = 0; d < r; ++d) {
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                double sum = 0.0;
                for (int c = 0; c < r; ++c) {
                    sum += G_inv(d, c) * (dG(a, c, b) + dG(b, a, c) - dG(c, a, b));
                }
                lambda(d, a, b) = 0.5 * sum;
            }
        }
    }

    // Frames at the stencil points, one pair per direction.
    std::vector<ImmersionFrame> plus, minus;
    std::vector<double> steps(static_cast<std::size_t>(r));
    for (int a = 0; a < r; ++a) {
        double h = (h_in > 0.0) ? h_in : fd_step(u[a]);
        steps[static_cast<std::size_t>(a)] = h;
        Eigen::VectorXd up = u, dn = u;
        up[a] += h;
        dn[a] -= h;
        plus.push_back(frame_at(im, up));
        minus.push_back(frame_at(im, dn));
    }

    const Tensor3& gamma = fr.ambient_conn.christoffel;
    auto normal_derivative_of_alpha = [&](int a, int b, int c) {
        const Eigen::VectorXd& xp =
            plus[static_cast<std::size_t>(a)].alpha_coord[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
        const Eigen::VectorXd& xm =
            minus[static_cast<std::size_t>(a)].alpha_coord[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
        const Eigen::VectorXd& x0 =
            fr.alpha_coord[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
        Eigen::VectorXd d = (xp - xm) / (2.0 * steps[static_cast<std::size_t>(a)]);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    d[i] += gamma(i, j, k) * fr.jacobian(j, a) * x0[k];
                }
            }
        }
        Eigen::VectorXd covariant = fr.normal_projector * d;
        for (int dd = 0; dd < r; ++dd) {
            covariant -= lambda(dd, a, b) *
                         fr.alpha_coord[static_cast<std::size_t>(dd)][static_cast<std::size_t>(c)];
            covariant -= lambda(dd, a, c) *
                         fr.alpha_coord[static_cast<std::size_t>(b)][static_cast<std::size_t>(dd)];
        }
        return covariant;
    };

    double defect = 0.0;
    double scale = 0.0;
    for (int a = 0; a < r; ++a) {
        for (int b = a + 1; b < r; ++b) {
            for (int c = 0; c < r; ++c) {
                Eigen::VectorXd lhs = fr.normal_projector *
                                      curvature_action(cd, fr.jacobian.col(a), fr.jacobian.col(b),
                                                       fr.jacobian.col(c));
                Eigen::VectorXd rhs =
                    normal_derivative_of_alpha(a, b, c) - normal_derivative_of_alpha(b, a, c);
                defect = std::max(defect, fr.norm_g(lhs - rhs));
                scale = std::max({scale, fr.norm_g(lhs), fr.norm_g(rhs)});
            }
        }
    }

    CheckVerdict v;
    v.check = "codazzi";
    v.defect = defect;
    v.tol = tol_fd * (1.0 + scale);
    v.pass = defect <= v.tol;
    v.details.emplace_back("scale", scale);
    return v;
}

double basis_independence_probe(const ImmersionFrame& fr, const CurvatureData& cd, int trials,
                                std::uint64_t seed) {
    check_frame_matches(fr, cd);
    const int r = fr.domain_dim();

    auto defect_norm = [&](const std::vector<Eigen::VectorXd>& frame) {
        double sq = 0.0;
        for (int j = 0; j < r; ++j) {
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(fr.ambient_dim());
            for (int i = 0; i < r; ++i) {
                sum += curvature_action(cd, frame[static_cast<std::size_t>(i)],
                                        frame[static_cast<std::size_t>(j)],
                                        frame[static_cast<std::size_t>(i)]);
            }
            const double n = fr.norm_g(fr.normal_projector * sum);
            sq += n * n;
        }
        return std::sqrt(sq);
    };

    const double base = defect_norm(fr.tangent_frame);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double spread = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::MatrixXd raw(r, r);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) raw(i, j) = gauss(rng);
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
        Eigen::MatrixXd q = qr.householderQ();

        std::vector<Eigen::VectorXd> rotated;
        rotated.reserve(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(fr.ambient_dim());
            for (int j = 0; j < r; ++j) e += q(i, j) * fr.tangent_frame[static_cast<std::size_t>(j)];
            rotated.push_back(std::move(e));
        }
        spread = std::max(spread, std::abs(defect_norm(rotated) - base));
    }
    return spread;
}

} // namespace curv
