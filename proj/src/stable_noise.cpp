#include "mips/stable_noise.hpp"

#include <cmath>

#include "mips/errors.hpp"
#include "mips/spectral.hpp"

namespace mips {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

void StableNoiseConfig::validate() const {
    require(alpha > 1.0 && alpha <= 2.0, "StableNoiseConfig: alpha must lie in (1,2]");
    require(dim >= 1, "StableNoiseConfig: dim must be >= 1");
}

double sample_subordinator_increment(RngStream& rng, double alpha_half, double dt) {
    require(alpha_half > 0.0 && alpha_half < 1.0,
            "subordinator: index must lie strictly inside (0,1)");
    require(dt > 0.0, "subordinator: dt must be positive");

    const double a = alpha_half;
    const double u = kPi * rng.uniform01();
    const double w = -std::log(rng.uniform01());
    // Kanter: A(u) = sin((1-a)u) * sin(a u)^{a/(1-a)} / sin(u)^{1/(1-a)},
    // S1 = (A/W)^{(1-a)/a} is standard positive a-stable with Laplace
    // transform exp(-lambda^a); dt^{1/a} rescales to exp(-dt*lambda^a).
    const double one_minus_a = 1.0 - a;
    const double log_a_part =
        std::log(std::sin(one_minus_a * u)) + (a / one_minus_a) * std::log(std::sin(a * u)) -
        (1.0 / one_minus_a) * std::log(std::sin(u));
    const double log_s1 = (one_minus_a / a) * (log_a_part - std::log(w));
    return std::pow(dt, 1.0 / a) * std::exp(log_s1);
}

void sample_stable_increment(RngStream& rng, const StableNoiseConfig& cfg, double dt, double* out) {
    require(dt > 0.0, "sample_stable_increment: dt must be positive");
    double scale;
    if (cfg.alpha == 2.0) {
        scale = std::sqrt(2.0 * dt);
    } else {
        const double s = sample_subordinator_increment(rng, 0.5 * cfg.alpha, dt);
        scale = std::sqrt(2.0 * s);
    }
    int i = 0;
    for (; i + 1 < cfg.dim; i += 2) {
        double z0, z1;
        rng.normal_pair(z0, z1);
        out[i] = scale * z0;
        out[i + 1] = scale * z1;
    }
    if (i < cfg.dim) out[i] = scale * rng.normal();
}

std::complex<double> empirical_char_function(const std::vector<double>& samples, int dim,
                                             const double* xi) {
    require(dim >= 1, "empirical_char_function: dim must be >= 1");
    require(!samples.empty() && samples.size() % static_cast<std::size_t>(dim) == 0,
            "empirical_char_function: need a nonempty multiple of dim");
    const std::size_t n = samples.size() / static_cast<std::size_t>(dim);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double phase = 0.0;
        for (int k = 0; k < dim; ++k) phase += xi[k] * samples[j * dim + k];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    const double inv = 1.0 / static_cast<double>(n);
    return {re * inv, im * inv};
}

bool heat_kernel_resolved(int n, double length, double t, double alpha) {
    const double xi_nyq = 2.0 * kPi / length * (n / 2);
    // exp(-t*xi^alpha) < 1e-14  <=>  t*xi^alpha > 14*ln(10)
    return t * std::pow(xi_nyq, alpha) > 14.0 * 2.302585092994046;
}

GridField heat_kernel_grid(const StableNoiseConfig& cfg, double t, const GridSpec& grid) {
    cfg.validate();
    require(t > 0.0, "heat_kernel_grid: t must be positive");
    require(grid.dim == cfg.dim, "heat_kernel_grid: grid/config dimension mismatch");
    if (!heat_kernel_resolved(grid.n, grid.length, t, cfg.alpha))
        throw validation_error("heat kernel under-resolved: raise n or t, or shrink L");

    SpectralWorkspace ws(grid.dim, grid.n, grid.length);
    std::vector<std::complex<double>> spec(ws.spectrum_size());
    const double half_alpha = 0.5 * cfg.alpha;
    double vol = grid.length;
    for (int k = 1; k < grid.dim; ++k) vol *= grid.length;
    // Continuum coefficients exp(-t|xi|^alpha)/L^d; the unnormalized c2r sum
    // reproduces the periodized kernel and pins the zero mode at exactly
    // 1/L^d, so the trapezoid mass is exactly one.
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double xs = ws.xi_squared()[i];
        const double damp = (xs == 0.0) ? 1.0 : std::exp(-t * std::pow(xs, half_alpha));
        spec[i] = damp / vol;
    }
    GridField out = GridField::zeros(grid.dim, grid.n, grid.length);
    ws.inverse_unnormalized(spec.data(), out.values.data());
    return out;
}

GridField semigroup_apply(const StableNoiseConfig& cfg, double t, const GridField& f) {
    cfg.validate();
    require(t >= 0.0, "semigroup_apply: t must be nonnegative");
    require(f.dim == cfg.dim, "semigroup_apply: field/config dimension mismatch");
    if (t == 0.0) return f;
    SpectralWorkspace ws(f.dim, f.n, f.length);
    std::vector<std::complex<double>> spec(ws.spectrum_size());
    GridField out = GridField::zeros(f.dim, f.n, f.length);
    ws.forward(f.values.data(), spec.data());
    ws.apply_stable_multiplier(spec.data(), t, cfg.alpha);
    ws.inverse(spec.data(), out.values.data());
    return out;
}

} // namespace mips
