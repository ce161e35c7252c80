// Timings for the curvature pipeline: the serial reference assembly against
// the production kernel (serial and OpenMP), and the batch point loop at
// several thread counts.

#include "curv/catalog.hpp"
#include "curv/kernels.hpp"
#include "curv/riemann.hpp"
#include "curv/runner.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Eigen::VectorXd> sample_points(const curv::DomainBox& box, int count,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> points;
    const int dim = static_cast<int>(box.lo.size());
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd p(dim);
        for (int d = 0; d < dim; ++d) p[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * unit(rng);
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace

int main(int argc, char** argv) {
    const int points_count = argc > 1 ? std::atoi(argv[1]) : 200;

    auto fs = curv::instantiate("fubini-study", {{"n", 4}}); // dim 8 chart
    const curv::MetricChart& chart = fs.ambient->metric();
    auto points = sample_points(*fs.points_box(), points_count, 7);

    std::printf("chart: %s, dim %d, %d points\n", chart.name().c_str(), chart.dim(),
                points_count);

    // Reference vs production assembly at a single point (correctness is
    // asserted in the tests; here we only time them).
    {
        const Eigen::VectorXd& p = points.front();
        curv::CurvatureOptions serial_opts;
        auto t0 = Clock::now();
        for (int i = 0; i < 50; ++i) curv::curvature_at(chart, p, serial_opts);
        const double serial = seconds_since(t0) / 50.0;

        curv::CurvatureOptions par_opts;
        par_opts.parallel_kernel = true;
        t0 = Clock::now();
        for (int i = 0; i < 50; ++i) curv::curvature_at(chart, p, par_opts);
        const double parallel = seconds_since(t0) / 50.0;

        std::printf("single-point assembly: serial kernel %.3f ms, openmp kernel %.3f ms\n",
                    serial * 1e3, parallel * 1e3);
    }

    // Batch point loop, serial vs threaded.
    for (int threads : {1, 2, 4, 8}) {
        auto t0 = Clock::now();
        std::vector<double> sink(points.size());
        curv::kernels::parallel_for(static_cast<int>(points.size()), threads, [&](int i) {
            curv::CurvatureData cd = curv::curvature_at(chart, points[static_cast<std::size_t>(i)]);
            sink[static_cast<std::size_t>(i)] = cd.max_abs_riemann;
        });
        double total = 0.0;
        for (double v : sink) total += v;
        std::printf("batch curvature, %d thread(s): %.3f s  (checksum %.6f)\n", threads,
                    seconds_since(t0), total);
    }

    return 0;
}
