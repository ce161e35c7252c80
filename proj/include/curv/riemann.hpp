#pragma once

#include "curv/expr.hpp"
#include "curv/kernels.hpp"
#include "curv/verdict.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curv {

/// Numerical-geometry failure: non-SPD metric, rank deficiency, degenerate
/// plane, ill-conditioned inversion.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Axis-aligned sampling box.
struct DomainBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

/// Coordinate chart with expression-valued metric entries in x1..xm.
/// Symmetric by construction: only the upper triangle is stored and (i,j)
/// and (j,i) resolve to the same node.
class MetricChart {
public:
    MetricChart() = default;

    /// `upper` lists entries row-major for i <= j.
    static MetricChart from_upper(int dim, std::vector<ExprPtr> upper, std::string name);

    /// Builds from entry source strings for the full matrix; entries across
    /// the diagonal must be textually identical and are parsed once.
    static MetricChart from_strings(int dim,
                                    const std::vector<std::vector<std::string>>& entries,
                                    std::string name);

    /// Diagonal metric with a shared expression per coordinate.
    static MetricChart diagonal(int dim, std::vector<ExprPtr> diag, std::string name);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const ExprPtr& entry(int i, int j) const;
    const std::vector<std::string>& var_order() const { return vars_; }

    std::optional<DomainBox> domain_hint;

private:
    int dim_ = 0;
    std::string name_;
    std::vector<ExprPtr> upper_; // row-major, i <= j
    std::vector<std::string> vars_;
};

/// Metric, inverse, first derivatives, and connection at a point; enough for
/// second-fundamental-form work without assembling curvature.
struct ConnectionData {
    Eigen::VectorXd point;
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    Tensor3 dg;          // dg(a, b, c) = d_a g_bc
    Tensor3 christoffel; // (i, j, k) = Gamma^i_jk
};

/// Full pointwise curvature package. riemann(a,b,c,d) = <R(d_a,d_b)d_c, d_d>
/// with R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]; riemann_up
/// carries the same tensor with the last index raised.
struct CurvatureData {
    Eigen::VectorXd point;
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    Tensor3 dg;
    Tensor3 christoffel;
    Tensor4 riemann;
    Tensor4 riemann_up;
    double max_abs_riemann = 0.0;

    int dim() const { return static_cast<int>(point.size()); }
    double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(g * v);
    }
    double norm(const Eigen::VectorXd& u) const { return std::sqrt(inner(u, u)); }
};

struct CurvatureOptions {
    bool parallel_kernel = false; ///< OpenMP inside the tensor assembly
    double max_condition = 1e12;  ///< reject metrics worse than this
};

/// Evaluates metric, connection, and curvature at `point`. Derivatives come
/// from second-order jets of the entries, so everything here is exact to
/// roundoff. Throws GeometryError if the metric is not SPD (or is nearly
/// degenerate) at the point.
CurvatureData curvature_at(const MetricChart& chart, const Eigen::VectorXd& point,
                           const CurvatureOptions& opts = {});

/// Metric and connection only (skips the rank-4 assembly).
ConnectionData connection_at(const MetricChart& chart, const Eigen::VectorXd& point);

/// Scalar contraction R(u,v,w,z) = sum R_abcd u^a v^b w^c z^d. The sum runs
/// over antisymmetrized index pairs, so swapping u,v (or w,z) flips the sign
/// bit-exactly even in floating point.
double riemann_inner(const CurvatureData& cd, const Eigen::VectorXd& u,
                     const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& z);

/// Vector R(u,v)w with the last index raised; same antisymmetrized pair trick
/// over (u,v).
Eigen::VectorXd curvature_action(const CurvatureData& cd, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// Sectional curvature K(u,v) = <R(u,v)v,u> / (|u|^2|v|^2 - <u,v>^2).
/// Throws GeometryError for (nearly) dependent u,v.
double sectional(const CurvatureData& cd, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v);

/// Ricci form, basis-free contraction: Ric(w, eta) = -g^ac R_(a w a... ) --
/// concretely -sum_{abcd} g^ac R_abcd w^b eta^d, which matches the trace of
/// v -> R(v, w) v over any orthonormal basis.
double ricci(const CurvatureData& cd, const Eigen::VectorXd& w, const Eigen::VectorXd& eta);

/// Einstein test at the point: rho = (1/m) sum_i Ric(e_i,e_i) over a
/// g-orthonormal frame, defect = max_ij |Ric(e_i,e_j) - rho delta_ij|.
CheckVerdict einstein_check_at(const CurvatureData& cd, double tol);

/// Space-form test: rho = K(e1,e2), defect = max |R_abcd - rho (g_ad g_bc -
/// g_ac g_bd)|, passing below tol * max(1, |rho|, max|R|).
CheckVerdict constant_curvature_check_at(const CurvatureData& cd, double tol);

/// Gram-Schmidt with respect to the inner product g, no pivoting. Returns the
/// orthonormal vectors; `coeff`, when non-null, receives the lower-triangular
/// matrix with e_i = sum_a coeff(i,a) v_a. Throws GeometryError on rank
/// deficiency (residual below 1e-12 of the input scale).
std::vector<Eigen::VectorXd> gram_schmidt(const std::vector<Eigen::VectorXd>& vectors,
                                          const Eigen::MatrixXd& g,
                                          Eigen::MatrixXd* coeff = nullptr);

/// g-orthonormal frame spanning the whole tangent space at the point of `cd`
/// (Gram-Schmidt of the coordinate basis).
std::vector<Eigen::VectorXd> orthonormal_frame(const Eigen::MatrixXd& g);

} // namespace curv
