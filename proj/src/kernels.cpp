#include "curv/kernels.hpp"

#include <cmath>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curv {

double Tensor4::max_abs() const {
    double best = 0.0;
    for (double v : data) best = std::max(best, std::abs(v));
    return best;
}

namespace kernels {

Tensor3 christoffel(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv) {
    const int m = md.m;
    Tensor3 gamma(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = j; k < m; ++k) {
                double sum = 0.0;
                for (int l = 0; l < m; ++l) {
                    sum += g_inv(i, l) * (md.dg(j, l, k) + md.dg(k, j, l) - md.dg(l, j, k));
                }
                gamma(i, j, k) = 0.5 * sum;
                gamma(i, k, j) = gamma(i, j, k);
            }
        }
    }
    return gamma;
}

namespace {

// d_a g^el = -(g^-1 dg[a] g^-1)_el
std::vector<Eigen::MatrixXd> inverse_derivatives(const MetricDerivatives& md,
                                                 const Eigen::MatrixXd& g_inv) {
    const int m = md.m;
    std::vector<Eigen::MatrixXd> dginv(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        Eigen::MatrixXd dga(m, m);
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) dga(b, c) = md.dg(a, b, c);
        }
        dginv[static_cast<std::size_t>(a)] = -g_inv * dga * g_inv;
    }
    return dginv;
}

// d_a Gamma^e_bc, fully written out so each value depends only on its own
// indices (this is what makes the parallel split deterministic).
double dgamma(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv,
              const std::vector<Eigen::MatrixXd>& dginv, int a, int e, int b, int c) {
    const int m = md.m;
    double sum = 0.0;
    for (int l = 0; l < m; ++l) {
        sum += dginv[static_cast<std::size_t>(a)](e, l) *
               (md.dg(b, l, c) + md.dg(c, b, l) - md.dg(l, b, c));
        sum += g_inv(e, l) *
               (md.second(a, b)(l, c) + md.second(a, c)(b, l) - md.second(a, l)(b, c));
    }
    return 0.5 * sum;
}

} // namespace

Tensor4 riemann(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv,
                const Tensor3& gamma, bool parallel) {
    const int m = md.m;
    const auto dginv = inverse_derivatives(md, g_inv);
    Tensor4 out(m);

#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
#endif
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (a == b) continue; // antisymmetric slots; the diagonal stays 0
            for (int c = 0; c < m; ++c) {
                // e-component of R(d_a, d_b) d_c
                for (int e = 0; e < m; ++e) {
                    double r = dgamma(md, g_inv, dginv, a, e, b, c) -
                               dgamma(md, g_inv, dginv, b, e, a, c);
                    for (int f = 0; f < m; ++f) {
                        r += gamma(f, b, c) * gamma(e, a, f) -
                             gamma(f, a, c) * gamma(e, b, f);
                    }
                    for (int d = 0; d < m; ++d) {
                        out(a, b, c, d) += md.g(e, d) * r;
                    }
                }
            }
        }
    }
    return out;
}

Tensor4 riemann_reference(const MetricDerivatives& md, const Eigen::MatrixXd& g_inv) {
    const int m = md.m;

    Tensor3 gamma(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                double sum = 0.0;
                for (int l = 0; l < m; ++l) {
                    sum += g_inv(i, l) * (md.dg(j, l, k) + md.dg(k, j, l) - md.dg(l, j, k));
                }
                gamma(i, j, k) = 0.5 * sum;
            }
        }
    }

    const auto dginv = inverse_derivatives(md, g_inv);
    auto dGamma = [&](int a, int e, int b, int c) {
        double sum = 0.0;
        for (int l = 0; l < m; ++l) {
            sum += dginv[static_cast<std::size_t>(a)](e, l) *
                   (md.dg(b, l, c) + md.dg(c, b, l) - md.dg(l, b, c));
            sum += g_inv(e, l) *
                   (md.second(a, b)(l, c) + md.second(a, c)(b, l) - md.second(a, l)(b, c));
        }
        return 0.5 * sum;
    };

    Tensor4 out(m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                for (int d = 0; d < m; ++d) {
                    double value = 0.0;
                    for (int e = 0; e < m; ++e) {
                        double r = dGamma(a, e, b, c) - dGamma(b, e, a, c);
                        for (int f = 0; f < m; ++f) {
                            r += gamma(f, b, c) * gamma(e, a, f) -
                                 gamma(f, a, c) * gamma(e, b, f);
                        }
                        value += md.g(e, d) * r;
                    }
                    out(a, b, c, d) = value;
                }
            }
        }
    }
    return out;
}

Tensor4 raise_last_index(const Tensor4& lowered, const Eigen::MatrixXd& g_inv,
                         bool parallel) {
    const int m = lowered.m;
    Tensor4 out(m);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (parallel)
#endif
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                for (int e = 0; e < m; ++e) {
                    double sum = 0.0;
                    for (int d = 0; d < m; ++d) {
                        sum += lowered(a, b, c, d) * g_inv(d, e);
                    }
                    out(a, b, c, e) = sum;
                }
            }
        }
    }
    return out;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;

    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    auto guarded = [&](int i) {
        try {
            fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (threads == 1) {
        for (int i = 0; i < count; ++i) guarded(i);
    } else {
#ifdef _OPENMP
        if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (int i = 0; i < count; ++i) guarded(i);
        } else {
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < count; ++i) guarded(i);
        }
#else
        for (int i = 0; i < count; ++i) guarded(i);
#endif
    }

    if (first_error) std::rethrow_exception(first_error);
}

} // namespace kernels
} // namespace curv
