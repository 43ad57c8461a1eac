#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mips/ensemble.hpp"
#include "mips/grid.hpp"
#include "mips/mollifier.hpp"

namespace mips {

// One measured error value; rows of the result CSV.  rep is -1 for
// estimators pooled across replications (total variation).
struct ErrorRecord {
    std::string scenario;
    double alpha = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    long long n_particles = 0;
    long long rep = 0;
    double t = 0.0;
    std::string kind;  // density_sup | tv | pathwise
    double value = 0.0;
    std::uint64_t seed = 0;
};

struct ErrorTable {
    std::vector<ErrorRecord> records;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
    double theoretical_slope = 0.0;
};

// Sup over the reference grid nodes and all particle positions of
// |rho_ref - mollified empirical density|; the union captures both reference
// extrema and the kernel bumps where the estimate peaks.
double density_sup_error(const GridField& rho_ref, const ParticleEnsemble& ensemble,
                         const ScaledKernel& kernel);

struct LmEstimate {
    double value = 0.0;
    double bootstrap_se = 0.0;
};

// (mean of value^m)^(1/m) over replications, with a 1000-resample bootstrap
// standard error.  Deterministic for a fixed seed.
LmEstimate lm_omega_norm(const std::vector<double>& values, int m, std::uint64_t seed);

struct TvEstimate {
    double value = 0.0;         // debiased, clamped to [0,1]
    double bootstrap_se = 0.0;  // of the debiased value
    double band_lo = 0.0;       // spread across half/double bin widths
    double band_hi = 0.0;
    double raw = 0.0;           // plain binned estimate before debiasing
    double floor_mean = 0.0;    // raw estimate's expectation under exact sampling
    int bins = 0;
};

// Half L1 distance between a histogram of the samples and the reference
// density, with the pure-sampling expectation of the same statistic measured
// on synthetic exact draws and divided out:
//     value = (raw - floor) / (1 - floor), clamped to [0, 1].
// Bin width starts from max(L/n_grid, 3.5*sigma_ref*n^{-1/3}) and snaps to a
// power-of-two bin count dividing the grid, so bins align with grid cells.
TvEstimate tv_error(const std::vector<double>& samples, const GridField& rho_ref,
                    std::uint64_t seed);

// Plain binned estimate at an explicit bin count (power of two dividing the
// grid); exposed for estimator tests.
double tv_binned_raw(const std::vector<double>& samples, const GridField& rho_ref, int bins);

// Least squares on (log N, log error).
RateFit fit_rate(const std::vector<long long>& n_values, const std::vector<double>& errors,
                 double theoretical_slope);

// -min(theta*beta, 1/2 - theta*dim), the predicted log-log slope.
double theoretical_rate_slope(double theta, double beta, int dim);

} // namespace mips
