#pragma once

#include "curv/kahler.hpp"
#include "curv/riemann.hpp"
#include "curv/verdict.hpp"

#include <memory>

namespace curv {

/// Parametrized immersion u -> f(u) into an ambient chart. Components are
/// expressions in u1..ur; the induced metric makes it isometric by
/// construction.
struct ImmersionChart {
    int domain_dim = 0;
    std::vector<ExprPtr> components; // one per ambient coordinate
    std::shared_ptr<const Ambient> ambient;
    std::string name;
    std::optional<DomainBox> domain_hint; // parameter box

    static ImmersionChart make(int domain_dim, std::vector<ExprPtr> components,
                               std::shared_ptr<const Ambient> ambient, std::string name);
    static ImmersionChart from_strings(int domain_dim, const std::vector<std::string>& components,
                                       std::shared_ptr<const Ambient> ambient, std::string name);

    const std::vector<std::string>& var_order() const { return vars_; }
    int ambient_dim() const { return ambient->metric().dim(); }

private:
    std::vector<std::string> vars_; // u1..ur
};

/// Everything the submanifold checks need at one parameter point: the pushed
/// forward basis, an orthonormalized tangent frame, the normal projector, the
/// second fundamental form in both bases, and the mean curvature vector.
struct ImmersionFrame {
    Eigen::VectorXd u;
    Eigen::VectorXd p; // f(u)
    Eigen::MatrixXd jacobian; // m x r, column a = f_* d/du_a
    std::vector<Eigen::MatrixXd> component_hessians; // per ambient coordinate, r x r
    Eigen::MatrixXd induced_g; // r x r
    std::vector<Eigen::VectorXd> tangent_frame; // r g-orthonormal ambient vectors
    Eigen::MatrixXd gs_coeff; // e_i = sum_a gs_coeff(i,a) * jacobian.col(a)
    Eigen::MatrixXd normal_projector; // m x m, g-orthogonal
    std::vector<std::vector<Eigen::VectorXd>> alpha;       // orthonormal frame basis
    std::vector<std::vector<Eigen::VectorXd>> alpha_coord; // coordinate basis
    Eigen::VectorXd mean_curvature;
    ConnectionData ambient_conn; // at p

    int domain_dim() const { return static_cast<int>(u.size()); }
    int ambient_dim() const { return static_cast<int>(p.size()); }
    double norm_g(const Eigen::VectorXd& v) const {
        return std::sqrt(std::max(0.0, v.dot(ambient_conn.g * v)));
    }
};

/// Central-difference step used for the normal-connection quantities:
/// cbrt(machine epsilon) * max(1, |coordinate|).
double fd_step(double coordinate);

/// Evaluates the immersion at u. Throws GeometryError when the Jacobian is
/// rank deficient there.
ImmersionFrame frame_at(const ImmersionChart& im, const Eigen::VectorXd& u);

/// Tangency of w -> sum_i R(e_i, w) e_i over the tangent frame: the defect is
/// the largest g-norm of the normal component with w running over the frame
/// (enough, by linearity).
CheckVerdict special_check_at(const ImmersionFrame& fr, const CurvatureData& cd, double tol);

/// Tangency of R(v,w)v for all tangent v,w, reduced by polarization to the
/// symmetrized frame triples P_perp(R(e_i,e_k)e_j + R(e_j,e_k)e_i).
CheckVerdict very_special_check_at(const ImmersionFrame& fr, const CurvatureData& cd, double tol);

/// alpha(X,Y) = <X,Y> H against the frame entries.
CheckVerdict umbilical_check_at(const ImmersionFrame& fr, double tol);

/// Normal-connection derivative of the mean curvature field along parameter
/// direction `direction`: central difference of H plus the ambient
/// Christoffel correction at f(u), projected to the normal space.
Eigen::VectorXd normal_derivative_H(const ImmersionChart& im, const Eigen::VectorXd& u,
                                    int direction, double h = 0.0);

/// Umbilical with parallel mean curvature.
CheckVerdict extrinsic_sphere_check_at(const ImmersionChart& im, const Eigen::VectorXd& u,
                                       double tol_exact, double tol_fd);

/// Codazzi residual with coordinate fields X = d_a, Y = d_b, Z = d_c:
///   (R(X,Y)Z)^perp - [(nabla^perp_X alpha)(Y,Z) - (nabla^perp_Y alpha)(X,Z)]
/// where the outer normal derivatives are central differences of the alpha
/// field and the induced connection comes from the induced metric.
CheckVerdict codazzi_residual_at(const ImmersionChart& im, const Eigen::VectorXd& u,
                                 double tol_fd, double h = 0.0);

/// Re-runs the special-check defect vector under `trials` random orthogonal
/// rotations of the tangent frame and returns the largest deviation of its
/// Euclidean norm from the unrotated one.
double basis_independence_probe(const ImmersionFrame& fr, const CurvatureData& cd, int trials,
                                std::uint64_t seed);

} // namespace curv
