// Benchmark: serial reference vs the OpenMP kernels for the data-parallel
// hot paths (operator assembly, kernel-grid precomputation, residual sweep).

#include <chrono>
#include <cstdio>

#include "fht/gfunction.hpp"
#include "fht/kernels.hpp"
#include "fht/oracle.hpp"

using namespace fht;

namespace {

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f ms %10.3f ms   speedup %.2fx\n", name, 1e3 * serial,
                1e3 * parallel, serial / parallel);
}

} // namespace

int main() {
#ifdef FHT_HAVE_OPENMP
    std::printf("openmp enabled, %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp disabled; both columns run the serial path\n");
#endif
    std::printf("%-28s %13s %13s\n", "kernel", "serial", "openmp");

    IntervalConfig cfg = make_config(-1.0, 1.0, {0.0}, BandLabel::E);
    GEvaluator gfun = GEvaluator::from_config(cfg);
    KernelEvaluator ker(cfg, gfun);

    {
        auto s = time_best_of(3, [&] { build_discrete(cfg, 1024, 1e-12, Exec::serial); });
        auto p = time_best_of(3, [&] { build_discrete(cfg, 1024, 1e-12, Exec::openmp); });
        row("build_discrete(1024)", s, p);
    }
    {
        std::vector<double> xs;
        for (int i = 1; i <= 2000; ++i) xs.push_back(-1.0 + 2.0 * i / 2001.0);
        auto s = time_best_of(3, [&] { ker.precompute_grid(xs, Exec::serial); });
        auto p = time_best_of(3, [&] { ker.precompute_grid(xs, Exec::openmp); });
        row("kernel grid (2000 pts)", s, p);
    }
    {
        auto s = time_best_of(3, [&] { eigen_residual(ker, 1e-3, 0.3, 0.7, 41, Exec::serial); });
        auto p = time_best_of(3, [&] { eigen_residual(ker, 1e-3, 0.3, 0.7, 41, Exec::openmp); });
        row("eigen_residual", s, p);
    }
    return 0;
}
