#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curv/catalog.hpp"
#include "curv/jet.hpp"
#include "curv/kernels.hpp"
#include "curv/riemann.hpp"

#include <cstring>
#include <random>

using namespace curv;

namespace {

/// Metric derivatives of a catalog chart at a point, via jets (the same
/// input both assembly kernels consume).
kernels::MetricDerivatives derivatives_at(const MetricChart& chart, const Eigen::VectorXd& p,
                                          Eigen::MatrixXd& g_inv) {
    const int m = chart.dim();
    kernels::MetricDerivatives md;
    md.m = m;
    md.g = Eigen::MatrixXd::Zero(m, m);
    md.dg = Tensor3(m);
    md.d2g.assign(static_cast<std::size_t>(m) * m, Eigen::MatrixXd::Zero(m, m));
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            Jet2 jet = eval_jet(*chart.entry(i, j), p, chart.var_order());
            md.g(i, j) = md.g(j, i) = jet.value;
            for (int a = 0; a < m; ++a) {
                md.dg(a, i, j) = md.dg(a, j, i) = jet.grad[a];
                for (int b = 0; b < m; ++b) {
                    md.d2g[static_cast<std::size_t>(a) * m + b](i, j) = jet.hess(a, b);
                    md.d2g[static_cast<std::size_t>(a) * m + b](j, i) = jet.hess(a, b);
                }
            }
        }
    }
    g_inv = md.g.inverse();
    return md;
}

Eigen::VectorXd random_point(const DomainBox& box, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd p(box.lo.size());
    for (int i = 0; i < p.size(); ++i) p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit(rng);
    return p;
}

} // namespace

TEST_CASE("production kernel agrees with the serial reference on catalog charts") {
    std::mt19937_64 rng(1);
    for (const char* name : {"sphere", "s2xs2", "bumpy3", "fubini-study", "conformal3"}) {
        auto inst = instantiate(name);
        const MetricChart& chart = inst.ambient->metric();
        for (int t = 0; t < 5; ++t) {
            Eigen::VectorXd p = random_point(*chart.domain_hint, rng);
            Eigen::MatrixXd g_inv;
            auto md = derivatives_at(chart, p, g_inv);
            Tensor3 gamma = kernels::christoffel(md, g_inv);
            Tensor4 fast = kernels::riemann(md, g_inv, gamma, true);
            Tensor4 ref = kernels::riemann_reference(md, g_inv);
            double diff = 0.0;
            for (std::size_t i = 0; i < fast.data.size(); ++i) {
                diff = std::max(diff, std::abs(fast.data[i] - ref.data[i]));
            }
            CAPTURE(name);
            CHECK(diff <= 1e-12 * (1.0 + ref.max_abs()));
        }
    }
}

TEST_CASE("parallel assembly is bitwise identical to serial assembly") {
    std::mt19937_64 rng(2);
    auto inst = instantiate("fubini-study", {{"n", 3}});
    const MetricChart& chart = inst.ambient->metric();
    Eigen::VectorXd p = random_point(*chart.domain_hint, rng);
    Eigen::MatrixXd g_inv;
    auto md = derivatives_at(chart, p, g_inv);
    Tensor3 gamma = kernels::christoffel(md, g_inv);

    Tensor4 serial = kernels::riemann(md, g_inv, gamma, false);
    Tensor4 parallel = kernels::riemann(md, g_inv, gamma, true);
    REQUIRE(serial.data.size() == parallel.data.size());
    CHECK(std::memcmp(serial.data.data(), parallel.data.data(),
                      serial.data.size() * sizeof(double)) == 0);

    Tensor4 up_serial = kernels::raise_last_index(serial, g_inv, false);
    Tensor4 up_parallel = kernels::raise_last_index(parallel, g_inv, true);
    CHECK(std::memcmp(up_serial.data.data(), up_parallel.data.data(),
                      up_serial.data.size() * sizeof(double)) == 0);
}

TEST_CASE("antisymmetry in the first index pair is bitwise exact") {
    std::mt19937_64 rng(3);
    auto inst = instantiate("s2xs2");
    const MetricChart& chart = inst.ambient->metric();
    Eigen::VectorXd p = random_point(*chart.domain_hint, rng);
    CurvatureData cd = curvature_at(chart, p);
    const int m = chart.dim();
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                for (int d = 0; d < m; ++d) {
                    CHECK(cd.riemann(a, b, c, d) == -cd.riemann(b, a, c, d));
                }
            }
        }
    }
}

TEST_CASE("parallel_for covers the range once and forwards exceptions") {
    std::vector<int> hits(997, 0);
    kernels::parallel_for(997, 4, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
    for (int h : hits) CHECK(h == 1);

    CHECK_THROWS_AS(kernels::parallel_for(16, 4,
                                          [&](int i) {
                                              if (i == 7) throw std::runtime_error("boom");
                                          }),
                    std::runtime_error);

    kernels::parallel_for(0, 4, [&](int) { FAIL("must not be called"); });
}
