#pragma once

#include <cmath>

namespace mips {

/// Maps x into [0, L).
inline double wrap_position(double x, double length) {
    double w = std::fmod(x, length);
    if (w < 0.0) w += length;
    if (w >= length) w = 0.0;  // fmod can land exactly on length after the fix-up
    return w;
}

/// Signed minimum-image difference a - b on a circle of circumference L.
inline double torus_delta(double a, double b, double length) {
    double d = a - b;
    d -= length * std::round(d / length);
    return d;
}

/// Squared minimum-image distance on the torus [0, L)^dim.
inline double torus_dist2(const double* a, const double* b, int dim, double length) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double d = torus_delta(a[k], b[k], length);
        s += d * d;
    }
    return s;
}

} // namespace mips
