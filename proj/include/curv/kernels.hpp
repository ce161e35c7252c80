#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace curv {

/// Dense rank-3 holder, row-major over (i, j, k). Dimensions stay small
/// (m <= 12) so flat storage beats anything fancier.
struct Tensor3 {
    int m = 0;
    std::vector<double> data;

    Tensor3() = default;
    explicit Tensor3(int dim) : m(dim), data(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k) {
        return data[(static_cast<std::size_t>(i) * m + j) * m + k];
    }
    double operator()(int i, int j, int k) const {
        return data[(static_cast<std::size_t>(i) * m + j) * m + k];
    }
};

/// Dense rank-4 holder, row-major over (a, b, c, d).
struct Tensor4 {
    int m = 0;
    std::vector<double> data;

    Tensor4() = default;
    explicit Tensor4(int dim)
        : m(dim), data(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

    double& operator()(int a, int b, int c, int d) {
        return data[((static_cast<std::size_t>(a) * m + b) * m + c) * m + d];
    }
    double operator()(int a, int b, int c, int d) const {
        return data[((static_cast<std::size_t>(a) * m + b) * m + c) * m + d];
    }

    double max_abs() const;
};

namespace kernels {

/// Pointwise metric data: values, first and second coordinate derivatives.
///   dg(a, b, c)     = d_a g_bc
///   d2g(a, b)(c, d) = d_a d_b g_cd   (stored as m*m matrices of m x m)
struct MetricDerivatives {
    int m = 0;
    Eigen::MatrixXd g;
    Tensor3 dg;
    std::vector<Eigen::MatrixXd> d2g; // index (a*m + b), symmetric in (a,b)

    const Eigen::MatrixXd& second(int a, int b) const {
        return d2g[static_cast<std::size_t>(a) * m + b];
    }
};

/// Levi-Civita connection coefficients from metric derivatives:
///   Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_jl - d_l g_jk)
Tensor3 christoffel(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv);

/// Curvature assembly with the convention
///   R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y],
///   R_abcd = < R(d_a, d_b) d_c , d_d >.
/// Component (a,b,c,d) is computed independently of all others, so the
/// OpenMP split over (a,b) is bitwise identical to the serial order and to
/// any thread count.
Tensor4 riemann(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv,
                const Tensor3& gamma, bool parallel);

/// Straight-line serial implementation kept as the reference for the
/// parallel kernel; recomputes everything from (g, g_inv, dg, d2g) with its
/// own loops.
Tensor4 riemann_reference(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv);

/// Raises the last index: out(a,b,c,e) = sum_d R_abcd g^de.
Tensor4 raise_last_index(const Tensor4& lowered, const Eigen::MatrixXd& g_inv,
                         bool parallel);

/// Runs fn(i) for i in [0, count), optionally across OpenMP threads.
/// `threads` <= 1 means serial; 0 means the OpenMP default. Exceptions from
/// workers are captured and rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

} // namespace kernels
} // namespace curv
