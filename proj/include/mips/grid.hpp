#pragma once

#include <cstddef>
#include <vector>

#include "mips/errors.hpp"

namespace mips {

/// Shape of a periodic grid: n points per axis on a torus of side length L.
struct GridSpec {
    int dim = 1;
    int n = 0;
    double length = 0.0;
};

/// Periodic real scalar field; carries densities and heat kernels.
/// Row-major storage, node (i1, ..., id) at coordinates (i1*h, ..., id*h).
struct GridField {
    int dim = 1;
    int n = 0;
    double length = 0.0;
    std::vector<double> values;

    static GridField zeros(int dim, int n, double length);

    double spacing() const { return length / n; }
    std::size_t size() const { return values.size(); }
    double node(int i) const { return i * spacing(); }
    GridSpec spec() const { return {dim, n, length}; }
};

bool is_power_of_two(int n);

/// h^d * sum of values; on a periodic grid the trapezoid and rectangle rules coincide.
double trapezoid_mass(const GridField& f);

double min_value(const GridField& f);
double max_value(const GridField& f);
double sup_abs(const GridField& f);
double sup_diff(const GridField& a, const GridField& b);
double lp_norm(const GridField& f, double p);
bool all_finite(const GridField& f);

/// Checks the density invariants (finite, near-nonnegative, unit mass).
void validate_density(const GridField& f, double mass_tol, double neg_tol);

/// Periodic cubic (Catmull-Rom) interpolation at x in model coordinates.
/// dim 1: x has 1 component; dim 2: separable bicubic on 16 nodes.
double periodic_cubic_interp(const GridField& f, const double* x);

/// Circular shift by whole grid cells (axis-wise), used by equivariance checks.
GridField circular_shift(const GridField& f, const int* cells);

} // namespace mips
