#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mips/grid.hpp"
#include "mips/rng.hpp"

namespace mips {

// Isotropic alpha-stable increments over a time step dt, characteristic
// function exp(-dt*|xi|^alpha).  Sampling goes through subordination: draw a
// positive (alpha/2)-stable time change S with Laplace transform
// exp(-dt*lambda^{alpha/2}), then return a centered Gaussian vector with
// covariance 2S*I.  alpha = 2 short-circuits to covariance 2*dt*I, so the
// generator is the plain Laplacian and no subordinator draw happens.
struct StableNoiseConfig {
    double alpha = 2.0;
    int dim = 1;

    void validate() const;
};

// One positive strictly stable variable with index alpha_half in (0,1) and
// Laplace transform exp(-dt*lambda^{alpha_half}), via the Kanter
// representation.  Consumes exactly two uniforms.
double sample_subordinator_increment(RngStream& rng, double alpha_half, double dt);

// Writes the dim components of one increment into out.
void sample_stable_increment(RngStream& rng, const StableNoiseConfig& cfg, double dt, double* out);

// (1/n) * sum_j exp(i <xi, sample_j>) over flattened d-vectors.
std::complex<double> empirical_char_function(const std::vector<double>& samples, int dim,
                                             const double* xi);

// Transition density of the increment process at time t, periodized onto the
// torus grid.  Assembled in Fourier space from the multiplier
// exp(-t|xi|^alpha), so its grid mass is exactly one.  Rejects grids whose
// Nyquist mode is not damped below 1e-14.
GridField heat_kernel_grid(const StableNoiseConfig& cfg, double t, const GridSpec& grid);

// True when exp(-t*(pi*n/L)^alpha) < 1e-14, i.e. the kernel fits the grid.
bool heat_kernel_resolved(int n, double length, double t, double alpha);

// e^{-t(-Laplace)^{alpha/2}} f by spectral multiplication; t = 0 returns f
// unchanged bit-for-bit.
GridField semigroup_apply(const StableNoiseConfig& cfg, double t, const GridField& f);

} // namespace mips
