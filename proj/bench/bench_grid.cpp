// Compares the serial and parallel grid solvers on the tangent family.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "quadode/family.hpp"
#include "quadode/solve.hpp"

int main(int argc, char** argv) {
    using namespace quadode;
    const long n = argc > 1 ? std::atol(argv[1]) : 20000;
    if (n < 2) {
        std::fprintf(stderr, "usage: bench_grid [npoints >= 2]\n");
        return 2;
    }
    Family fam = family_from_u(Poly{Rational(1), Rational(0), Rational(1)});
    solver::SolveConfig cfg;  // anchor (0,0), y = tan(x)
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] =
            -1.45 + 2.9 * static_cast<double>(i) / static_cast<double>(n - 1);

    auto now = [] {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now().time_since_epoch())
            .count();
    };
    double t0 = now();
    solver::SolutionTable serial = solver::solve_grid_serial(fam, cfg, xs);
    double t1 = now();
    solver::SolutionTable parallel = solver::solve_grid_parallel(fam, cfg, xs);
    double t2 = now();

    double maxdiff = 0.0;
    for (std::size_t i = 0; i < serial.rows.size(); ++i)
        maxdiff = std::max(maxdiff, std::fabs(serial.rows[i].y - parallel.rows[i].y));

    std::printf("grid points     : %ld\n", n);
    std::printf("serial          : %8.3f s\n", t1 - t0);
    std::printf("parallel        : %8.3f s\n", t2 - t1);
    std::printf("speedup         : %8.2fx\n", (t1 - t0) / std::max(t2 - t1, 1e-9));
    std::printf("max |y_s - y_p| : %.3g\n", maxdiff);
#if defined(_OPENMP)
    std::printf("omp threads     : %d\n", omp_get_max_threads());
#else
    std::printf("omp threads     : (built without OpenMP)\n");
#endif
    return maxdiff < 1e-9 ? 0 : 1;
}
