#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curv/jet.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace curv;

namespace {

Jet2 jet_of(const std::string& src, std::initializer_list<double> coords,
            const std::vector<std::string>& vars) {
    Eigen::VectorXd point(static_cast<int>(coords.size()));
    int i = 0;
    for (double c : coords) point[i++] = c;
    return eval_jet(*parse(src, vars), point, vars);
}

const std::vector<std::string> kXY = {"x1", "x2"};

} // namespace

TEST_CASE("seed") {
    Eigen::VectorXd p(2);
    p << 3.0, 4.0;
    Jet2 a = Jet2::seed(p, 0);
    CHECK(a.value == 3.0);
    CHECK(a.grad[0] == 1.0);
    CHECK(a.grad[1] == 0.0);
    CHECK(a.hess.cwiseAbs().maxCoeff() == 0.0);
    Jet2 b = Jet2::seed(p, 1);
    CHECK(b.value == 4.0);
    CHECK(b.grad[0] == 0.0);
    CHECK(b.grad[1] == 1.0);
    CHECK_THROWS_AS(Jet2::seed(Eigen::VectorXd(), 0), std::out_of_range);
}

TEST_CASE("product rule") {
    Jet2 j = jet_of("x1*x2", {3.0, 4.0}, kXY);
    CHECK(j.value == 12.0);
    CHECK(j.grad[0] == 4.0);
    CHECK(j.grad[1] == 3.0);
    CHECK(j.hess(0, 1) == 1.0);
    CHECK(j.hess(1, 0) == 1.0);
    CHECK(j.hess(0, 0) == 0.0);
}

TEST_CASE("sin at zero") {
    Jet2 j = jet_of("sin(x1)", {0.0}, {"x1"});
    CHECK(j.value == 0.0);
    CHECK(j.grad[0] == 1.0);
    CHECK(j.hess(0, 0) == 0.0);
}

TEST_CASE("exp(x^2) matches central differences") {
    Jet2 j = jet_of("exp(x1^2)", {1.0}, {"x1"});
    auto f = [](const Eigen::VectorXd& x) { return std::exp(x[0] * x[0]); };
    Eigen::VectorXd p(1);
    p << 1.0;
    const double h = 1e-4;
    const double g_fd = oracles::fd_gradient(f, p, h)[0];
    const double h_fd = oracles::fd_hessian(f, p, h)(0, 0);
    CHECK(std::abs(j.grad[0] - g_fd) / std::abs(g_fd) < 1e-5);
    CHECK(std::abs(j.hess(0, 0) - h_fd) / std::abs(h_fd) < 1e-5);
}

TEST_CASE("quadratic") {
    Jet2 j = jet_of("x1^2 + x2^2", {1.0, 2.0}, kXY);
    CHECK(j.value == 5.0);
    CHECK(j.grad[0] == 2.0);
    CHECK(j.grad[1] == 4.0);
    CHECK(j.hess(0, 0) == 2.0);
    CHECK(j.hess(1, 1) == 2.0);
    CHECK(j.hess(0, 1) == 0.0);
}

TEST_CASE("constants have zero derivatives") {
    Jet2 j = jet_of("pi", {0.7, -0.3}, kXY);
    CHECK(j.value == M_PI);
    CHECK(j.grad.cwiseAbs().maxCoeff() == 0.0);
    CHECK(j.hess.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("poincare factor at the origin") {
    Jet2 j = jet_of("4/(1 - x1^2 - x2^2)^2", {0.0, 0.0}, kXY);
    CHECK(j.value == 4.0);
    CHECK(j.grad.cwiseAbs().maxCoeff() == 0.0);
    CHECK(j.hess(0, 0) == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(j.hess(1, 1) == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(std::abs(j.hess(0, 1)) < 1e-13);
}

TEST_CASE("domain errors propagate from jets") {
    CHECK_THROWS_AS(jet_of("1/x1", {0.0}, {"x1"}), EvalError);
    CHECK_THROWS_AS(jet_of("ln(x1)", {0.0}, {"x1"}), EvalError);
    CHECK_THROWS_AS(jet_of("sqrt(x1)", {0.0}, {"x1"}), EvalError);
    CHECK_THROWS_AS(jet_of("x1^-1", {0.0}, {"x1"}), EvalError);
}

TEST_CASE("gradient and hessian match finite differences on random expressions") {
    std::mt19937_64 rng(987654);
    const double h = 1e-4;
    int accepted = 0;
    int attempts = 0;
    while (accepted < 500 && attempts < 5000) {
        ++attempts;
        auto sample = oracles::sample_smooth_expr(rng, kXY, 2.0 * h);
        ExprPtr e = parse(sample.source, kXY);
        Jet2 j = eval_jet(*e, sample.point, kXY);

        auto f = [&](const Eigen::VectorXd& x) {
            return eval_value(*e, {{"x1", x[0]}, {"x2", x[1]}});
        };
        const Eigen::VectorXd g_fd = oracles::fd_gradient(f, sample.point, h);
        const Eigen::MatrixXd h_fd = oracles::fd_hessian(f, sample.point, h);

        // The oracle certifies itself by step doubling: if the two stencils
        // disagree, the truncation error is too large at this sample for the
        // stated tolerance and the draw does not count as well-scaled.
        const Eigen::VectorXd g_fd2 = oracles::fd_gradient(f, sample.point, 2.0 * h);
        const Eigen::MatrixXd h_fd2 = oracles::fd_hessian(f, sample.point, 2.0 * h);
        const double gscale = std::max(1.0, g_fd.cwiseAbs().maxCoeff());
        const double hscale = std::max(1.0, h_fd.cwiseAbs().maxCoeff());
        if ((g_fd - g_fd2).cwiseAbs().maxCoeff() / gscale > 2e-6 ||
            (h_fd - h_fd2).cwiseAbs().maxCoeff() / hscale > 2e-4) {
            continue;
        }
        ++accepted;

        CAPTURE(sample.source);
        CHECK((j.grad - g_fd).cwiseAbs().maxCoeff() / gscale < 1e-5);
        CHECK((j.hess - h_fd).cwiseAbs().maxCoeff() / hscale < 1e-3);
    }
    CHECK(accepted == 500);
}

TEST_CASE("hessian symmetry is exact on composite evaluations") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 200; ++i) {
        auto sample = oracles::sample_smooth_expr(rng, kXY, 1e-4);
        Jet2 j = eval_jet(*parse(sample.source, kXY), sample.point, kXY);
        CHECK((j.hess - j.hess.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("jet value equals eval_value bit for bit") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 300; ++i) {
        auto sample = oracles::sample_smooth_expr(rng, kXY, 1e-5);
        ExprPtr e = parse(sample.source, kXY);
        const double direct =
            eval_value(*e, {{"x1", sample.point[0]}, {"x2", sample.point[1]}});
        Jet2 j = eval_jet(*e, sample.point, kXY);
        CHECK(j.value == direct);
    }
}
