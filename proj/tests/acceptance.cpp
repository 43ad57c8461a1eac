// Acceptance gate: ten criteria, one PASS/FAIL line each.  Tolerances are
// pinned here; nothing is read from the environment.  Run a subset by naming
// criteria on the command line (./acceptance a1 a6), no arguments runs all.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mips/cell_kde.hpp"
#include "mips/density1d.hpp"
#include "mips/experiment.hpp"
#include "mips/fpe.hpp"
#include "mips/mollifier.hpp"
#include "mips/reference.hpp"
#include "mips/rng.hpp"
#include "mips/scenarios.hpp"
#include "mips/simulate.hpp"
#include "mips/stable_noise.hpp"
#include "mips/torus.hpp"

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Shared experiment settings; dt, dt_pde, and the kernel radius are tuned so
// the full gate fits a single-core budget, every tolerance below is not.
constexpr double kLength = 20.0;
constexpr double kTheta = 0.25;
constexpr double kDt = 2e-3;
constexpr double kDtPde = 5e-4;
constexpr double kTEnd = 0.5;
constexpr int kGridN = 1024;
constexpr double kBumpRadius = 0.5;
constexpr std::uint64_t kSeed = 1000003;

int g_checks_failed = 0;

void check(bool ok, const char* fmt, ...) {
    if (!ok) ++g_checks_failed;
    std::printf("  %s ", ok ? "[ok] " : "[BAD]");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
}

// Runs fn with a fresh failure counter; returns true when no check failed.
template <typename F>
bool criterion(F fn) {
    const int before = g_checks_failed;
    fn();
    return g_checks_failed == before;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path("acceptance_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MIPS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

mips::ExperimentConfig base_config() {
    mips::ExperimentConfig cfg;
    cfg.scenario = "fractional_burgers";
    cfg.alphas = {1.5};
    cfg.theta = kTheta;
    cfg.m_list = {2};
    cfg.n_list = {256, 512, 1024, 2048, 4096, 8192, 16384};
    cfg.replications = 32;
    cfg.dt = kDt;
    cfg.dt_pde = kDtPde;
    cfg.t_end = kTEnd;
    cfg.snapshot_times = {kTEnd};
    cfg.grid_n = kGridN;
    cfg.domain_length = kLength;
    cfg.seed = kSeed;
    cfg.bump_radius = kBumpRadius;
    return cfg;
}

double se_of_difference(double a, double b) { return std::sqrt(a * a + b * b); }

double median_of_sorted_copy(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double bootstrap_median_se(const std::vector<double>& v, std::uint64_t key) {
    mips::RngStream rng = mips::derive_stream(kSeed, mips::StreamPurpose::bootstrap, 0xacceu, key);
    const std::size_t n = v.size();
    const int b_count = 1000;
    std::vector<double> meds(b_count), draw(n);
    for (int b = 0; b < b_count; ++b) {
        for (double& x : draw) x = v[rng.below(n)];
        meds[static_cast<std::size_t>(b)] = median_of_sorted_copy(draw);
    }
    double mean = 0.0;
    for (double m : meds) mean += m;
    mean /= b_count;
    double var = 0.0;
    for (double m : meds) var += (m - mean) * (m - mean);
    return std::sqrt(var / (b_count - 1));
}

// ---------------------------------------------------------------- criteria

void a1_noise_law() {
    const std::size_t n_draws = 1000000;
    std::uint64_t combo = 0;
    for (int dim : {1, 2}) {
        for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
            mips::StableNoiseConfig cfg;
            cfg.alpha = alpha;
            cfg.dim = dim;
            mips::RngStream rng =
                mips::derive_stream(kSeed, mips::StreamPurpose::generic, 0xa1, combo++);
            std::vector<double> draws(n_draws * static_cast<std::size_t>(dim));
            for (std::size_t i = 0; i < n_draws; ++i)
                mips::sample_stable_increment(rng, cfg, 1.0,
                                              &draws[i * static_cast<std::size_t>(dim)]);

            double worst = 0.0;
            for (int j = 0; j < 8; ++j) {
                double xi[2] = {0.0, 0.0};
                const double mag = 0.25 + 0.45 * j;  // 0.25 .. 3.4
                if (dim == 1) {
                    xi[0] = mag;
                } else {
                    const double angle = 0.3 + 0.7 * j;
                    xi[0] = mag * std::cos(angle);
                    xi[1] = mag * std::sin(angle);
                }
                const std::complex<double> ecf =
                    mips::empirical_char_function(draws, dim, xi);
                const double target = std::exp(-std::pow(mag, alpha));
                worst = std::max(worst, std::abs(ecf - std::complex<double>(target, 0.0)));
            }
            check(worst <= 3e-3, "alpha=%.1f d=%d: worst |ecf - exp(-|xi|^a)| = %.2e <= 3e-3",
                  alpha, dim, worst);
        }
    }
}

void a2_kernel_identities() {
    const double length = 40.0;
    const int n = 2048;
    const mips::GridSpec grid{1, n, length};
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
        mips::StableNoiseConfig cfg;
        cfg.alpha = alpha;
        cfg.dim = 1;

        const double t = 0.3, s = 0.2;
        const mips::GridField qt = mips::heat_kernel_grid(cfg, t, grid);
        const mips::GridField qts = mips::heat_kernel_grid(cfg, t + s, grid);
        const mips::GridField chained = mips::semigroup_apply(cfg, s, qt);
        check(mips::sup_diff(chained, qts) <= 1e-12,
              "alpha=%.1f: |P_s q_t - q_{t+s}|_inf = %.2e <= 1e-12", alpha,
              mips::sup_diff(chained, qts));

        const double mass_err = std::abs(mips::trapezoid_mass(qt) - 1.0);
        check(mass_err <= 1e-10, "alpha=%.1f: |mass - 1| = %.2e <= 1e-10", alpha, mass_err);

        // q(t, x) = s q(1, s x) with s = t^{-1/alpha}, realized by scaling the
        // circle so node j of the unit-time kernel sits at s * x_j
        const double scale = std::pow(t, -1.0 / alpha);
        const mips::GridField q1 =
            mips::heat_kernel_grid(cfg, 1.0, {1, n, length * scale});
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(qt.values[static_cast<std::size_t>(i)] -
                                             scale * q1.values[static_cast<std::size_t>(i)]));
        check(worst <= 1e-6, "alpha=%.1f: scaling identity defect %.2e <= 1e-6", alpha, worst);
    }
}

void a3_pde_sanity() {
    mips::DriftSpec zero;
    zero.eval = [](double, double, double) { return 0.0; };
    zero.kappa = 0.0;
    zero.beta = 1.0;

    // driftless solve equals the exact semigroup
    for (double alpha : {1.5, 2.0}) {
        mips::FpeConfig cfg;
        cfg.noise.alpha = alpha;
        cfg.noise.dim = 1;
        cfg.drift = zero;
        cfg.grid = {1, 512, kLength};
        cfg.dt_pde = kDtPde;
        cfg.t_end = 0.1;
        const mips::GridField rho0 =
            mips::Density1d::wrapped_gaussian(kLength, 10.0, 1.0).to_grid(512);
        const mips::DensityPath path = mips::solve_fpe(cfg, rho0);
        const mips::GridField exact = mips::semigroup_apply(cfg.noise, cfg.t_end, rho0);
        check(mips::sup_diff(path.fields.back(), exact) <= 1e-12,
              "alpha=%.1f: driftless solve vs semigroup %.2e <= 1e-12", alpha,
              mips::sup_diff(path.fields.back(), exact));
    }

    // alpha = 2 against the closed-form wrapped gaussian
    {
        mips::FpeConfig cfg;
        cfg.noise.alpha = 2.0;
        cfg.noise.dim = 1;
        cfg.drift = zero;
        cfg.grid = {1, kGridN, kLength};
        cfg.dt_pde = kDtPde;
        cfg.t_end = 0.25;
        const double sigma0 = 1.0;
        const mips::GridField rho0 =
            mips::Density1d::wrapped_gaussian(kLength, 10.0, sigma0).to_grid(kGridN);
        const mips::DensityPath path = mips::solve_fpe(cfg, rho0);
        const double sigma_t = std::sqrt(sigma0 * sigma0 + 2.0 * cfg.t_end);
        double worst = 0.0;
        for (int i = 0; i < kGridN; ++i) {
            double exact = 0.0;
            const double x = rho0.node(i);
            for (int k = -12; k <= 12; ++k) {
                const double d = x - 10.0 + k * kLength;
                exact += std::exp(-0.5 * d * d / (sigma_t * sigma_t)) /
                         (sigma_t * std::sqrt(2.0 * kPi));
            }
            worst = std::max(
                worst, std::abs(path.fields.back().values[static_cast<std::size_t>(i)] - exact));
        }
        check(worst <= 1e-8, "gaussian closed form defect %.2e <= 1e-8", worst);
    }

    // constant drift is a pure translation of the driftless solution
    {
        const double c = 2.0;
        mips::FpeConfig cfg;
        cfg.noise.alpha = 1.6;
        cfg.noise.dim = 1;
        cfg.drift.eval = [c](double, double, double) { return c; };
        cfg.drift.kappa = c;
        cfg.drift.beta = 1.0;
        cfg.grid = {1, kGridN, kLength};
        cfg.dt_pde = kDtPde;
        cfg.t_end = 0.2;
        const mips::GridField rho0 =
            mips::Density1d::wrapped_gaussian(kLength, 10.0, 1.0).to_grid(kGridN);
        const mips::DensityPath path = mips::solve_fpe(cfg, rho0);
        const mips::GridField spread = mips::semigroup_apply(cfg.noise, cfg.t_end, rho0);
        double worst = 0.0;
        for (int i = 0; i < kGridN; ++i) {
            const double x = rho0.node(i) - c * cfg.t_end;
            worst = std::max(worst,
                             std::abs(path.fields.back().values[static_cast<std::size_t>(i)] -
                                      mips::periodic_cubic_interp(spread, &x)));
        }
        check(worst <= 1e-6, "translation identity defect %.2e <= 1e-6", worst);
    }

    // halving dt divides the defect by about four
    {
        const mips::ScenarioSpec s = mips::make_scenario("fractional_burgers", kLength);
        mips::FpeConfig cfg;
        cfg.noise.alpha = 1.5;
        cfg.noise.dim = 1;
        cfg.drift = s.drift;
        cfg.grid = {1, 512, kLength};
        cfg.dt_pde = 2e-3;
        cfg.t_end = 0.2;
        const double factor = mips::self_convergence_factor(cfg, s.rho0.to_grid(512));
        check(factor >= 3.0 && factor <= 5.0, "self-convergence factor %.3f in [3, 5]", factor);
    }
}

void a4_conservation() {
    for (double alpha : {1.5, 2.0}) {
        const mips::ScenarioSpec s = mips::make_scenario("fractional_burgers", kLength);
        mips::FpeConfig cfg;
        cfg.noise.alpha = alpha;
        cfg.noise.dim = 1;
        cfg.drift = s.drift;
        cfg.grid = {1, kGridN, kLength};
        cfg.dt_pde = kDtPde;
        cfg.t_end = kTEnd;
        const mips::DensityPath path = mips::solve_fpe(cfg, s.rho0.to_grid(kGridN));
        double mass_err = 0.0;
        for (const mips::GridField& f : path.fields)
            mass_err = std::max(mass_err, std::abs(mips::trapezoid_mass(f) - 1.0));
        check(mass_err <= 1e-8, "alpha=%.1f: worst |mass - 1| = %.2e <= 1e-8", alpha, mass_err);

        const mips::DensityDiagnostics diag =
            mips::diagnostics_density_estimates(path, 2.0, 1.0, 1.0 + 1e-6);
        check(diag.max_sup_ratio <= 1.0 + 1e-6,
              "alpha=%.1f: sup-norm ratio %.9f <= 1 + 1e-6", alpha, diag.max_sup_ratio);
    }
}

void a5_kde_oracle() {
    mips::RngStream rng = mips::derive_stream(kSeed, mips::StreamPurpose::generic, 0xa5);
    const double radii[3] = {0.3, 0.5, 1.0};
    double worst = 0.0;
    long long worst_n = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const long long n = 64 + static_cast<long long>(rng.below(1985));  // <= 2048
        mips::ParticleEnsemble e = mips::ParticleEnsemble::zeros(1, n, kLength);
        for (long long i = 0; i < n; ++i)
            e.pos[static_cast<std::size_t>(i)] = rng.uniform(0.0, kLength);
        const mips::BumpKernel base = mips::make_bump_kernel(1, radii[trial % 3]);
        const mips::ScaledKernel kernel = mips::scale_kernel(base, n, kTheta);
        const mips::CellList cl = mips::build_cell_list(e, kernel.support_radius);

        std::vector<double> queries(64);
        for (double& q : queries) q = rng.uniform(0.0, kLength);
        std::vector<double> fast(queries.size()), slow(queries.size());
        mips::kde_at_points(cl, kernel, queries.data(), queries.size(), fast.data());
        mips::kde_brute_at_points(e, kernel, queries.data(), queries.size(), slow.data());
        for (std::size_t i = 0; i < queries.size(); ++i) {
            const double d = std::abs(fast[i] - slow[i]);
            if (d > worst) {
                worst = d;
                worst_n = n;
            }
        }

        std::vector<double> at_fast(static_cast<std::size_t>(n)),
            at_slow(static_cast<std::size_t>(n));
        mips::kde_at_particles(cl, kernel, at_fast.data());
        mips::kde_brute_at_particles(e, kernel, at_slow.data());
        for (long long i = 0; i < n; ++i) {
            const double d = std::abs(at_fast[static_cast<std::size_t>(i)] -
                                      at_slow[static_cast<std::size_t>(i)]);
            if (d > worst) {
                worst = d;
                worst_n = n;
            }
        }
    }
    check(worst <= 1e-12, "200 trials: worst |cell - brute| = %.2e (N = %lld) <= 1e-12", worst,
          worst_n);
}

// A6 and A8 share one cross-alpha run (alpha = 1.5 plus the gaussian anchor).
const mips::CrossAlphaResult& cross_alpha_run() {
    static std::optional<mips::CrossAlphaResult> cached;
    if (!cached) {
        mips::ExperimentConfig cfg = base_config();
        cfg.alphas = {1.5, 2.0};
        cfg.out_dir = fresh_dir("a6_a8").string();
        std::printf("  (running the two-alpha convergence study; this is the long step)\n");
        cached = mips::run_cross_alpha(cfg);
    }
    return *cached;
}

void a6_density_rate() {
    const mips::CrossAlphaResult& res = cross_alpha_run();
    std::size_t idx = res.alphas.size();
    for (std::size_t i = 0; i < res.alphas.size(); ++i)
        if (std::abs(res.alphas[i] - 1.5) < 1e-12) idx = i;
    const mips::ConvergenceResult& conv = res.per_alpha.at(idx);

    std::vector<const mips::AggregateEntry*> series;
    for (const mips::AggregateEntry& a : conv.aggregates)
        if (a.m == 2 && a.t == kTEnd) series.push_back(&a);
    check(series.size() == 7, "m=2 aggregate series covers all 7 particle counts (%zu)",
          series.size());

    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double allowed =
            se_of_difference(series[i]->est.bootstrap_se, series[i + 1]->est.bootstrap_se);
        const bool ok = series[i + 1]->est.value < series[i]->est.value + allowed;
        if (!ok) decreasing = false;
        std::printf("    N %6lld -> %6lld: %.5f -> %.5f (slack %.5f)%s\n",
                    series[i]->n_particles, series[i + 1]->n_particles, series[i]->est.value,
                    series[i + 1]->est.value, allowed, ok ? "" : "  <-- not decreasing");
    }
    check(decreasing, "L^2(Omega; L^inf) error decreases across N up to one standard error");

    const mips::RateFit& fit = conv.headline;
    check(fit.n_points == 7, "headline fit uses all 7 points");
    check(fit.slope <= -0.10, "fitted slope %.4f <= -0.10", fit.slope);
    check(std::abs(fit.slope - fit.theoretical_slope) <= 0.15,
          "fitted slope %.4f within 0.15 of predicted %.4f (r^2 = %.3f)", fit.slope,
          fit.theoretical_slope, fit.r_squared);
}

void a7_pathwise() {
    mips::ExperimentConfig cfg = base_config();
    cfg.out_dir = fresh_dir("a7").string();
    const mips::PathwiseResult res = mips::run_pathwise(cfg);

    // medians non-increasing up to a bootstrapped standard error of the median
    std::map<long long, std::vector<double>> by_n;
    for (const mips::ErrorRecord& r : res.table.records)
        by_n[r.n_particles].push_back(r.value);
    bool med_ok = true;
    for (std::size_t i = 0; i + 1 < res.medians.size(); ++i) {
        const auto& [n_lo, med_lo] = res.medians[i];
        const auto& [n_hi, med_hi] = res.medians[i + 1];
        const double se = se_of_difference(bootstrap_median_se(by_n[n_lo], i),
                                           bootstrap_median_se(by_n[n_hi], i + 1));
        const bool ok = med_hi <= med_lo + se;
        if (!ok) med_ok = false;
        std::printf("    median N %6lld -> %6lld: %.5f -> %.5f (slack %.5f)%s\n", n_lo, n_hi,
                    med_lo, med_hi, se, ok ? "" : "  <-- increased");
    }
    check(med_ok, "median pathwise error non-increasing in N up to one standard error");

    bool l2_ok = true;
    std::vector<const mips::AggregateEntry*> series;
    for (const mips::AggregateEntry& a : res.aggregates)
        if (a.m == 2) series.push_back(&a);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double allowed =
            se_of_difference(series[i]->est.bootstrap_se, series[i + 1]->est.bootstrap_se);
        const bool ok = series[i + 1]->est.value <= series[i]->est.value + allowed;
        if (!ok) l2_ok = false;
        std::printf("    L2 N %6lld -> %6lld: %.5f -> %.5f (slack %.5f)%s\n",
                    series[i]->n_particles, series[i + 1]->n_particles, series[i]->est.value,
                    series[i + 1]->est.value, allowed, ok ? "" : "  <-- increased");
    }
    check(l2_ok, "L^2(Omega) pathwise error non-increasing in N up to one standard error");

    // control: no drift couples the particle to the limit exactly
    mips::ExperimentConfig ctrl = base_config();
    ctrl.scenario = "zero_drift";
    ctrl.n_list = {256, 1024};
    ctrl.replications = 4;
    ctrl.out_dir = fresh_dir("a7_control").string();
    const mips::PathwiseResult zres = mips::run_pathwise(ctrl);
    double worst = 0.0;
    for (const mips::ErrorRecord& r : zres.table.records) worst = std::max(worst, r.value);
    check(worst == 0.0, "driftless control pathwise error is exactly zero (worst %.2e)", worst);
}

void a8_cross_alpha() {
    const mips::CrossAlphaResult& res = cross_alpha_run();
    for (std::size_t i = 0; i < res.alphas.size(); ++i)
        std::printf("    alpha %.1f: fitted slope %.4f\n", res.alphas[i],
                    res.headline_slopes[i]);
    check(res.max_slope_diff_vs_gaussian <= 0.15,
          "slope difference between alpha = 1.5 and alpha = 2.0 is %.4f <= 0.15",
          res.max_slope_diff_vs_gaussian);
}

void a9_determinism() {
    const fs::path dir = fresh_dir("a9");
    // small but genuinely parallel configuration
    const std::string cfg_path = (dir / "config.json").string();
    {
        std::ofstream out(cfg_path);
        out << "{\n"
               "  \"scenario\": \"fractional_burgers\",\n"
               "  \"alpha\": 1.5,\n"
               "  \"theta\": 0.25,\n"
               "  \"m\": [1, 2],\n"
               "  \"n_list\": [256, 512],\n"
               "  \"replications\": 4,\n"
               "  \"dt\": 1e-3,\n"
               "  \"dt_pde\": 2.5e-4,\n"
               "  \"t_end\": 0.05,\n"
               "  \"snapshot_times\": [0.05],\n"
               "  \"grid_n\": 512,\n"
               "  \"domain_length\": 20.0,\n"
               "  \"seed\": 77\n"
               "}\n";
    }
    const fs::path one = dir / "threads1", eight = dir / "threads8";
    const int rc1 =
        run_cli("convergence --config " + cfg_path + " --threads 1 --out-dir " + one.string());
    const int rc8 =
        run_cli("convergence --config " + cfg_path + " --threads 8 --out-dir " + eight.string());
    check(rc1 == 0 && rc8 == 0, "both thread budgets exit cleanly (%d, %d)", rc1, rc8);
    check(slurp(one / "errors_density_sup.csv") == slurp(eight / "errors_density_sup.csv"),
          "error CSVs byte-identical across thread budgets {1, 8}");
    check(slurp(one / "summary_convergence.json") == slurp(eight / "summary_convergence.json"),
          "summaries byte-identical across thread budgets {1, 8}");

    // relabeling the per-particle streams permutes the trajectories exactly
    const long long n = 128;
    mips::SimulationPlan plan;
    plan.noise.alpha = 1.5;
    plan.noise.dim = 1;
    const mips::ScenarioSpec s = mips::make_scenario("fractional_burgers", kLength);
    plan.drift = s.drift;
    plan.kernel = mips::scale_kernel(mips::make_bump_kernel(1, kBumpRadius), n, kTheta);
    plan.rho0 = s.rho0;
    plan.n_particles = n;
    plan.dt = 1e-3;
    plan.t_end = 0.05;
    plan.domain_length = kLength;
    plan.seed = kSeed;

    mips::SimulationPlan rev = plan;
    rev.stream_labels.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i)
        rev.stream_labels[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(n - 1 - i);
    const mips::ParticleEnsemble fwd = mips::simulate(plan).snapshots.back();
    const mips::ParticleEnsemble bwd = mips::simulate(rev).snapshots.back();
    bool permuted = true;
    for (long long i = 0; i < n; ++i)
        permuted = permuted && bwd.pos[static_cast<std::size_t>(i)] ==
                                   fwd.pos[static_cast<std::size_t>(n - 1 - i)];
    check(permuted, "reversing the stream labels reverses the trajectories bit-for-bit");
}

void a10_tv_trend() {
    // The distance of the single-particle law needs the strong-interaction end of
    // the bandwidth range to be resolvable: with a 2000-sample binned estimator the
    // floor sits near 0.034, while at the rate-study parameters (theta 0.25, radius
    // 0.5) the true distance is below 0.01 at every N here. With theta 0.45 and a
    // thin kernel the finite-N drift bias is visible at N=2^8 and gone by N=2^13.
    mips::ExperimentConfig cfg = base_config();
    cfg.theta = 0.45;
    cfg.bump_radius = 0.05;
    cfg.n_list = {256, 8192};
    cfg.replications = 2000;
    cfg.out_dir = fresh_dir("a10").string();
    std::printf("  (running 2000-replication weak studies; this takes a while)\n");
    const mips::WeakResult res = mips::run_weak(cfg);
    for (const auto& [n, tv] : res.estimates)
        std::printf("    N %6lld: tv %.4f (raw %.4f, floor %.4f, band [%.4f, %.4f], se %.4f)\n",
                    n, tv.value, tv.raw, tv.floor_mean, tv.band_lo, tv.band_hi,
                    tv.bootstrap_se);
    check(res.trend_beyond_band,
          "tv decrease %.4f from N=2^8 to N=2^13 exceeds the sensitivity band %.4f",
          res.decrease, res.band_max);

    mips::ExperimentConfig ctrl = base_config();
    ctrl.scenario = "zero_drift";
    ctrl.theta = 0.45;
    ctrl.bump_radius = 0.05;
    ctrl.n_list = {2048};
    ctrl.replications = 2000;
    ctrl.out_dir = fresh_dir("a10_control").string();
    const mips::WeakResult zres = mips::run_weak(ctrl);
    const mips::TvEstimate& tv = zres.estimates.front().second;
    check(tv.value <= 3.0 * tv.bootstrap_se,
          "driftless control tv %.4f <= 3 x bootstrap se %.4f", tv.value,
          3.0 * tv.bootstrap_se);
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        const char* name;
        void (*fn)();
    };
    const Entry entries[] = {
        {"a1", a1_noise_law},   {"a2", a2_kernel_identities}, {"a3", a3_pde_sanity},
        {"a4", a4_conservation}, {"a5", a5_kde_oracle},       {"a6", a6_density_rate},
        {"a7", a7_pathwise},    {"a8", a8_cross_alpha},       {"a9", a9_determinism},
        {"a10", a10_tv_trend},
    };

    std::vector<std::string> wanted;
    for (int i = 1; i < argc; ++i) {
        std::string w = argv[i];
        for (char& c : w) c = static_cast<char>(std::tolower(c));
        wanted.push_back(w);
    }

    int failed = 0, ran = 0;
    for (const Entry& e : entries) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), e.name) == wanted.end())
            continue;
        ++ran;
        std::string label = e.name;
        for (char& c : label) c = static_cast<char>(std::toupper(c));
        std::printf("%s running...\n", label.c_str());
        std::fflush(stdout);
        bool ok = false;
        try {
            ok = criterion(e.fn);
        } catch (const std::exception& ex) {
            std::printf("  [BAD] aborted: %s\n", ex.what());
            ++g_checks_failed;
        }
        std::printf("%s %s\n", label.c_str(), ok ? "PASS" : "FAIL");
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no matching criteria; names are a1 .. a10\n");
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
