#pragma once

#include <vector>

#include "mips/grid.hpp"
#include "mips/rng.hpp"

namespace mips {

// Initial laws on the circle [0, L).  Each family evaluates pointwise, fills
// a grid, and draws exact samples, so particle runs and the density solver
// start from the same distribution.
//
//   uniform           1/L
//   wrapped_gaussian  Gaussian(center, sigma^2) wrapped around the circle
//   sin_profile       (1 + amp*sin(2*pi*x/L))/L, floor (1-amp)/L, C-infinity
//   bump_mixture      weighted wrapped bumps of common support radius
//   holder_profile    (floor + |sin(2*pi*x/L)|^hbeta)/Z, only hbeta-Hoelder
struct Density1d {
    enum class Kind { uniform, wrapped_gaussian, sin_profile, bump_mixture, holder_profile };

    Kind kind = Kind::uniform;
    double length = 1.0;
    double center = 0.0;  // wrapped_gaussian
    double sigma = 1.0;   // wrapped_gaussian
    double amp = 0.0;     // sin_profile modulation in [0, 1)
    std::vector<double> centers;  // bump_mixture
    std::vector<double> weights;  // bump_mixture, positive, sums to 1
    double radius = 1.0;          // bump_mixture support radius
    double floor_frac = 0.0;      // holder_profile additive floor > 0
    double hbeta = 1.0;           // holder_profile exponent in (0,1]
    double norm = 1.0;            // cached normalization where quadrature is needed

    static Density1d uniform(double length);
    static Density1d wrapped_gaussian(double length, double center, double sigma);
    static Density1d sin_profile(double length, double amp);
    static Density1d bump_mixture(double length, std::vector<double> centers,
                                  std::vector<double> weights, double radius);
    static Density1d holder_profile(double length, double floor_frac, double hbeta);

    double operator()(double x) const;

    // Values at the n grid nodes, rescaled so the grid mass is exactly one.
    GridField to_grid(int n) const;

    // One draw from the law itself, by wrapping, monotone CDF inversion, or
    // exact rejection, never from a discretized stand-in.
    double sample(RngStream& rng) const;
};

// Tabulated inverse-CDF sampler for an arbitrary nonnegative grid density;
// backs the synthetic draws used to calibrate empirical-distance estimators.
class InverseCdfSampler1d {
  public:
    explicit InverseCdfSampler1d(const GridField& density, int table_size = 1 << 16);

    double sample(RngStream& rng) const;
    double length() const { return length_; }

  private:
    double length_;
    std::vector<double> cdf_;  // table_size + 1 nodes spanning [0, L]
};

} // namespace mips
