#include "mips/mollifier.hpp"

#include <cmath>

namespace mips {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double profile(double u) {
    // u = |x|^2 / R^2; all derivatives vanish at u = 1.
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u));
}

// Composite Simpson on [0,1]; the integrand is smooth with flat tails, so a
// fixed fine mesh is ample.
template <typename F>
double simpson01(F f, int intervals) {
    const double h = 1.0 / intervals;
    double s = f(0.0) + f(1.0);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

} // namespace

BumpKernel make_bump_kernel(int dim, double radius) {
    require(dim == 1 || dim == 2, "make_bump_kernel: dim must be 1 or 2");
    require(radius > 0.0, "make_bump_kernel: radius must be positive");
    double integral;
    if (dim == 1) {
        // int_{-R}^{R} profile(x^2/R^2) dx = 2R int_0^1 profile(s^2) ds
        integral = 2.0 * radius * simpson01([](double s) { return profile(s * s); }, 4096);
    } else {
        // 2*pi*R^2 int_0^1 profile(r^2) r dr
        integral = kTwoPi * radius * radius *
                   simpson01([](double r) { return profile(r * r) * r; }, 4096);
    }
    BumpKernel k;
    k.dim = dim;
    k.radius = radius;
    k.norm = 1.0 / integral;
    return k;
}

ScaledKernel scale_kernel(const BumpKernel& base, long long n_particles, double theta) {
    require(n_particles >= 1, "scale_kernel: need at least one particle");
    require(theta > 0.0 && theta < 0.5 / base.dim,
            "scale_kernel: theta must lie in (0, 1/(2*dim))");
    const double nd = static_cast<double>(n_particles);
    ScaledKernel k;
    k.dim = base.dim;
    k.n_particles = n_particles;
    k.support_radius = base.radius * std::pow(nd, -theta);
    k.inv_support_r2 = 1.0 / (k.support_radius * k.support_radius);
    k.amplitude = base.norm * std::pow(nd, theta * base.dim);
    return k;
}

double kernel_value_r2(const ScaledKernel& k, double r2) {
    const double u = r2 * k.inv_support_r2;
    if (u >= 1.0) return 0.0;
    return k.amplitude * std::exp(-1.0 / (1.0 - u));
}

double bump_value_r2(const BumpKernel& k, double r2) {
    return k.norm * profile(r2 / (k.radius * k.radius));
}

} // namespace mips
