#include "mips/grid.hpp"

#include <cmath>
#include <cstdio>

namespace mips {

GridField GridField::zeros(int dim, int n, double length) {
    require(dim == 1 || dim == 2, "GridField: dim must be 1 or 2");
    require(n >= 2 && is_power_of_two(n), "GridField: n must be a power of two >= 2");
    require(length > 0.0, "GridField: length must be positive");
    GridField f;
    f.dim = dim;
    f.n = n;
    f.length = length;
    std::size_t total = static_cast<std::size_t>(n);
    for (int k = 1; k < dim; ++k) total *= static_cast<std::size_t>(n);
    f.values.assign(total, 0.0);
    return f;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double trapezoid_mass(const GridField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    double hd = f.spacing();
    for (int k = 1; k < f.dim; ++k) hd *= f.spacing();
    return s * hd;
}

double min_value(const GridField& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

double max_value(const GridField& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::max(m, v);
    return m;
}

double sup_abs(const GridField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::fabs(v));
    return m;
}

double sup_diff(const GridField& a, const GridField& b) {
    require(a.values.size() == b.values.size(), "sup_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::fabs(a.values[i] - b.values[i]));
    return m;
}

double lp_norm(const GridField& f, double p) {
    double hd = f.spacing();
    for (int k = 1; k < f.dim; ++k) hd *= f.spacing();
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::fabs(v), p);
    return std::pow(s * hd, 1.0 / p);
}

bool all_finite(const GridField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

void validate_density(const GridField& f, double mass_tol, double neg_tol) {
    if (!all_finite(f)) throw numeric_error("density field has non-finite values");
    const double mass = trapezoid_mass(f);
    if (std::fabs(mass - 1.0) > mass_tol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "density mass %.3e drifted beyond %.1e", mass - 1.0, mass_tol);
        throw numeric_error(buf);
    }
    const double mn = min_value(f);
    if (mn < -neg_tol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "density undershoot %.3e beyond -%.1e", mn, neg_tol);
        throw numeric_error(buf);
    }
}

namespace {

// Catmull-Rom weights for fractional offset u in [0,1).
inline void catmull_rom_weights(double u, double w[4]) {
    w[0] = 0.5 * u * ((2.0 - u) * u - 1.0);
    w[1] = 0.5 * (u * u * (3.0 * u - 5.0) + 2.0);
    w[2] = 0.5 * u * ((4.0 - 3.0 * u) * u + 1.0);
    w[3] = 0.5 * u * u * (u - 1.0);
}

inline int wrap_index(long long i, int n) {
    long long m = i % n;
    if (m < 0) m += n;
    return static_cast<int>(m);
}

} // namespace

double periodic_cubic_interp(const GridField& f, const double* x) {
    const double h = f.spacing();
    if (f.dim == 1) {
        double s = x[0] / h;
        double fl = std::floor(s);
        double u = s - fl;
        long long i0 = static_cast<long long>(fl);
        double w[4];
        catmull_rom_weights(u, w);
        double acc = 0.0;
        for (int k = -1; k <= 2; ++k)
            acc += w[k + 1] * f.values[wrap_index(i0 + k, f.n)];
        return acc;
    }
    // dim == 2: separable
    double s0 = x[0] / h, s1 = x[1] / h;
    double fl0 = std::floor(s0), fl1 = std::floor(s1);
    long long i0 = static_cast<long long>(fl0), j0 = static_cast<long long>(fl1);
    double w0[4], w1[4];
    catmull_rom_weights(s0 - fl0, w0);
    catmull_rom_weights(s1 - fl1, w1);
    double acc = 0.0;
    for (int a = -1; a <= 2; ++a) {
        const int ia = wrap_index(i0 + a, f.n);
        double row = 0.0;
        for (int b = -1; b <= 2; ++b)
            row += w1[b + 1] * f.values[static_cast<std::size_t>(ia) * f.n + wrap_index(j0 + b, f.n)];
        acc += w0[a + 1] * row;
    }
    return acc;
}

GridField circular_shift(const GridField& f, const int* cells) {
    GridField out = f;
    if (f.dim == 1) {
        for (int i = 0; i < f.n; ++i)
            out.values[wrap_index(i + cells[0], f.n)] = f.values[i];
    } else {
        for (int i = 0; i < f.n; ++i)
            for (int j = 0; j < f.n; ++j)
                out.values[static_cast<std::size_t>(wrap_index(i + cells[0], f.n)) * f.n +
                           wrap_index(j + cells[1], f.n)] =
                    f.values[static_cast<std::size_t>(i) * f.n + j];
    }
    return out;
}

} // namespace mips
