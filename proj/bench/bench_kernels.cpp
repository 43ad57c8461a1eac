#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mips/cell_kde.hpp"
#include "mips/density1d.hpp"
#include "mips/mollifier.hpp"
#include "mips/reference.hpp"
#include "mips/scenarios.hpp"
#include "mips/simulate.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_once(const std::function<void()>& fn) {
    const auto t0 = clock_type::now();
    fn();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double time_best(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) best = std::min(best, time_once(fn));
    return best;
}

void bench_kde() {
    std::printf("kernel density estimate, all particles as queries\n");
    std::printf("%8s %14s %14s %9s\n", "N", "cell-list [s]", "all-pairs [s]", "speedup");
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::Density1d law = mips::Density1d::uniform(20.0);
    for (long long n : {1024LL, 4096LL, 16384LL, 65536LL}) {
        const mips::ParticleEnsemble e = mips::init_particles(law, n, 7, 0);
        const mips::ScaledKernel kernel = mips::scale_kernel(base, n, 0.25);
        std::vector<double> out(static_cast<std::size_t>(n));
        const double t_cell = time_best(5, [&] {
            const mips::CellList cl = mips::build_cell_list(e, kernel.support_radius);
            mips::kde_at_particles(cl, kernel, out.data());
        });
        const double t_brute =
            time_best(n > 16384 ? 1 : 3, [&] { mips::kde_brute_at_particles(e, kernel, out.data()); });
        std::printf("%8lld %14.6f %14.6f %8.1fx\n", n, t_cell, t_brute, t_brute / t_cell);
    }
}

void bench_stepping() {
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::printf("\nparticle stepping, fractional Burgers, alpha=1.5, 50 steps\n");
    std::printf("%8s %12s %12s %9s\n", "N", "1 thread", "all threads", "speedup");
    const mips::ScenarioSpec scenario = mips::make_scenario("fractional_burgers", 20.0);
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    for (long long n : {4096LL, 16384LL}) {
        mips::SimulationPlan plan;
        plan.noise.alpha = 1.5;
        plan.drift = scenario.drift;
        plan.kernel = mips::scale_kernel(base, n, 0.25);
        plan.rho0 = scenario.rho0;
        plan.n_particles = n;
        plan.dt = 1e-3;
        plan.t_end = 0.05;
        plan.domain_length = 20.0;
        plan.seed = 7;
        double t_serial = 0.0, t_parallel = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
#ifdef _OPENMP
            omp_set_num_threads(pass == 0 ? 1 : max_threads);
#endif
            const double t = time_once([&] { (void)mips::simulate(plan); });
            (pass == 0 ? t_serial : t_parallel) = t;
        }
#ifdef _OPENMP
        omp_set_num_threads(max_threads);
#endif
        std::printf("%8lld %12.4f %12.4f %8.1fx\n", n, t_serial, t_parallel,
                    t_serial / t_parallel);
    }
}

} // namespace

int main() {
    bench_kde();
    bench_stepping();
    return 0;
}
