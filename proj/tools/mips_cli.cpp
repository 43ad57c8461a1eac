#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mips/errors.hpp"
#include "mips/experiment.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::string scenario_override;
    std::optional<std::uint64_t> seed;
    std::optional<double> bump_radius;
    int threads = 0;
    bool dump_density = false;
    bool dump_particles = false;
};

void add_common(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--threads", opt.threads, "OpenMP thread budget (0 keeps the default)");
    sub->add_option("--out-dir", opt.out_dir, "output directory");
    sub->add_option("--scenario", opt.scenario_override, "override the config scenario");
    sub->add_option("--bump-radius", opt.bump_radius, "base interaction kernel radius");
    sub->add_flag("--dump-density", opt.dump_density, "also write the solved density path");
    sub->add_flag("--dump-particles", opt.dump_particles, "also write a final particle snapshot");
}

mips::ExperimentConfig load_config(const CliOptions& opt) {
    mips::ExperimentConfig cfg = mips::ExperimentConfig::from_json_file(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.scenario_override.empty()) cfg.scenario = opt.scenario_override;
    if (opt.bump_radius) cfg.bump_radius = *opt.bump_radius;
    cfg.out_dir = opt.out_dir;
    cfg.threads = opt.threads;
    cfg.dump_density = opt.dump_density;
    cfg.dump_particles = opt.dump_particles;
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moderately interacting particle system vs. nonlocal Fokker-Planck limit"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* conv = app.add_subcommand(
        "convergence", "density sup-norm error across particle counts, with a rate fit");
    CLI::App* pathw = app.add_subcommand(
        "pathwise", "coupled particle-vs-limit trajectory error across particle counts");
    CLI::App* weak =
        app.add_subcommand("weak", "total-variation distance of the single-particle law");
    CLI::App* cross = app.add_subcommand(
        "cross-alpha", "convergence runs per alpha in the list, comparing fitted slopes");
    CLI::App* kcheck = app.add_subcommand(
        "kernel-check", "cell-list estimator vs. serial reference, plus kernel normalization");
    for (CLI::App* sub : {conv, pathw, weak, cross, kcheck}) add_common(sub, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const mips::ExperimentConfig cfg = load_config(opt);
        if (conv->parsed()) {
            const mips::ConvergenceResult r = mips::run_convergence(cfg);
            std::printf("convergence: %zu records, headline slope %.4f (theory %.4f)\n",
                        r.table.records.size(), r.headline.slope,
                        r.headline.theoretical_slope);
        } else if (pathw->parsed()) {
            const mips::PathwiseResult r = mips::run_pathwise(cfg);
            std::printf("pathwise: %zu records, median at largest N %.6g\n",
                        r.table.records.size(),
                        r.medians.empty() ? 0.0 : r.medians.back().second);
        } else if (weak->parsed()) {
            const mips::WeakResult r = mips::run_weak(cfg);
            std::printf("weak: decrease %.4f, band %.4f, beyond band: %s\n", r.decrease,
                        r.band_max, r.trend_beyond_band ? "yes" : "no");
        } else if (cross->parsed()) {
            const mips::CrossAlphaResult r = mips::run_cross_alpha(cfg);
            std::printf("cross-alpha: max slope difference vs alpha=2: %.4f\n",
                        r.max_slope_diff_vs_gaussian);
        } else if (kcheck->parsed()) {
            const bool pass = mips::run_kernel_check(cfg);
            std::printf("kernel-check: %s\n", pass ? "pass" : "FAIL");
            if (!pass) return 3;
        }
    } catch (const mips::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const mips::numeric_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
