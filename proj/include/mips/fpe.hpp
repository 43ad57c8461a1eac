#pragma once

#include <vector>

#include "mips/drift.hpp"
#include "mips/grid.hpp"
#include "mips/stable_noise.hpp"

namespace mips {

// Mild-form solver for  d_t rho = -(-Laplace)^{alpha/2} rho - div(b(t,x,rho) rho)
// on the periodic grid.  The linear part is applied exactly through the
// Fourier multiplier; the transport term is integrated with a two-stage
// predictor-corrector built on the same semigroup.
struct FpeConfig {
    StableNoiseConfig noise;  // dim must be 1 for drift-driven solves
    DriftSpec drift;
    GridSpec grid;
    double dt_pde = 2.5e-4;
    double t_end = 0.5;
    bool dealias = true;

    void validate() const;
};

// Densities recorded at every solver step, uniformly spaced in time.
struct DensityPath {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<GridField> fields;
};

// One predictor-corrector step from time t to t + dt_pde:
//   F(rho)  = div(b(t,x,rho) rho) assembled spectrally (2/3-rule dealiased),
//   rho*    = P_dt rho - dt P_dt F(rho),
//   rho+    = P_dt rho - (dt/2)(P_dt F(rho) + F(rho*)),
// with P the stable semigroup.  The divergence has no mean mode, so the grid
// mass never moves.
GridField step_duhamel(const FpeConfig& cfg, const GridField& rho, double t);

// Full solve from rho0; throws numeric_error on blow-up or mass drift
// beyond 1e-6.
DensityPath solve_fpe(const FpeConfig& cfg, const GridField& rho0);

// Linear in t between recorded steps, periodic cubic in x; tiny negatives
// clamp to zero.  t must lie in [0, t_end] up to rounding slack.
double interpolate_density(const DensityPath& path, double t, double x);

// Sup-norm ratio err(dt)/err(dt/2) where err(h) compares the h and h/2
// solves at t_end; near 4 for second-order stepping.
double self_convergence_factor(const FpeConfig& cfg, const GridField& rho0);

// Norm and regularity monitors along a path.  Nothing here aborts; the flags
// report which configured envelope was exceeded.
struct DensityDiagnostics {
    std::vector<double> times;
    std::vector<double> sup_norm;
    std::vector<double> lp_norm;           // p as requested
    std::vector<double> holder_quotient;   // max |rho(x+h)-rho(x)| / h^beta, h = spacing
    std::vector<double> min_value;
    std::vector<double> mass;
    std::vector<double> boundary_mass;     // mass within L/4 of the seam at x = 0
    double max_sup_ratio = 0.0;            // sup_t ||rho_t||_inf / ||rho_0||_inf
    double max_holder_ratio = 0.0;
    bool sup_flag = false;                 // ratios exceeded the configured constant
    bool holder_flag = false;
    bool boundary_flag = false;            // boundary mass above 1e-8 somewhere
};

DensityDiagnostics diagnostics_density_estimates(const DensityPath& path, double p, double beta,
                                                 double flag_constant);

} // namespace mips
