#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mips/metrics.hpp"

namespace mips {

// Parsed run configuration.  The file carries exactly the thirteen keys
// below; out_dir, threads, and bump_radius arrive from the command line.
struct ExperimentConfig {
    std::string scenario;
    std::vector<double> alphas;  // "alpha" key, scalar or list
    double theta = 0.25;
    std::vector<int> m_list;  // "m" key, scalar or list
    std::vector<long long> n_list;
    int replications = 1;
    double dt = 1e-3;
    double dt_pde = 2.5e-4;
    double t_end = 0.5;
    std::vector<double> snapshot_times;  // empty: final time only
    int grid_n = 1024;
    double domain_length = 20.0;
    std::uint64_t seed = 1;

    std::string out_dir = ".";
    int threads = 0;  // 0: leave the runtime default
    double bump_radius = 1.0;
    bool dump_density = false;
    bool dump_particles = false;

    static ExperimentConfig from_json_file(const std::string& path);
    void validate() const;

    std::vector<double> snapshots_or_final() const;
};

struct AggregateEntry {
    int m = 0;
    double t = 0.0;
    long long n_particles = 0;
    LmEstimate est;
};

struct FitEntry {
    int m = 0;
    double t = 0.0;
    RateFit fit;
};

struct ConvergenceResult {
    ErrorTable table;
    std::vector<AggregateEntry> aggregates;
    std::vector<FitEntry> fits;
    RateFit headline;  // largest moment order at the latest snapshot
    double beta_eff = 0.0;
    std::vector<std::pair<long long, double>> avg_neighbors;
};

struct PathwiseResult {
    ErrorTable table;
    std::vector<AggregateEntry> aggregates;
    std::vector<std::pair<long long, double>> medians;
    std::vector<FitEntry> fits;  // empty when errors are identically zero
    RateFit headline;
};

struct WeakResult {
    ErrorTable table;
    std::vector<std::pair<long long, TvEstimate>> estimates;
    double decrease = 0.0;  // first-N minus last-N estimate
    double band_max = 0.0;  // wider of the two sensitivity bands
    bool trend_beyond_band = false;
};

struct CrossAlphaResult {
    std::vector<double> alphas;
    std::vector<ConvergenceResult> per_alpha;
    std::vector<double> headline_slopes;
    double max_slope_diff_vs_gaussian = 0.0;
};

// Each runner validates, executes, and writes its CSV table plus a JSON
// summary (and timings.json) into cfg.out_dir, then returns the results.
ConvergenceResult run_convergence(const ExperimentConfig& cfg);
PathwiseResult run_pathwise(const ExperimentConfig& cfg);
WeakResult run_weak(const ExperimentConfig& cfg);
CrossAlphaResult run_cross_alpha(const ExperimentConfig& cfg);

// Compares the cell-list estimator against the serial all-pairs reference on
// randomized ensembles and checks kernel normalization; writes a report.
bool run_kernel_check(const ExperimentConfig& cfg);

} // namespace mips
