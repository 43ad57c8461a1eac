#pragma once

#include "mips/errors.hpp"

namespace mips {

// Smooth compactly supported bump, profile exp(-1/(1 - |x|^2/R^2)) inside
// |x| < R and zero outside, normalized to unit mass by quadrature.
struct BumpKernel {
    int dim = 1;
    double radius = 1.0;  // support radius R
    double norm = 1.0;    // prefactor making the integral exactly one
};

// Interaction kernel at particle count N: amplitude N^{theta*d} times the
// base bump evaluated at N^theta x.  Support shrinks like R*N^{-theta}.
struct ScaledKernel {
    int dim = 1;
    long long n_particles = 1;     // N the scaling was taken at
    double support_radius = 0.0;
    double inv_support_r2 = 0.0;  // 1 / support_radius^2
    double amplitude = 0.0;       // norm * N^{theta*dim}
};

BumpKernel make_bump_kernel(int dim, double radius);

// Requires theta in (0, 1/(2*dim)) so the interaction stays moderate.
ScaledKernel scale_kernel(const BumpKernel& base, long long n_particles, double theta);

// Kernel value from squared distance; exact zero at or beyond the support.
double kernel_value_r2(const ScaledKernel& k, double r2);

// Base (unscaled) bump value at squared distance r2.
double bump_value_r2(const BumpKernel& k, double r2);

} // namespace mips
