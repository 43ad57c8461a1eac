#include "mips/density1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mips/mollifier.hpp"
#include "mips/torus.hpp"

namespace mips {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrtTwoPi = 0.39894228040143267793994605993;

template <typename F>
double simpson(double lo, double hi, int intervals, F f) {
    const double h = (hi - lo) / intervals;
    double s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return s * h / 3.0;
}
} // namespace

Density1d Density1d::uniform(double length) {
    require(length > 0.0, "Density1d: length must be positive");
    Density1d d;
    d.kind = Kind::uniform;
    d.length = length;
    return d;
}

Density1d Density1d::wrapped_gaussian(double length, double center, double sigma) {
    require(length > 0.0, "Density1d: length must be positive");
    require(sigma > 0.0, "Density1d: sigma must be positive");
    Density1d d;
    d.kind = Kind::wrapped_gaussian;
    d.length = length;
    d.center = center;
    d.sigma = sigma;
    return d;
}

Density1d Density1d::sin_profile(double length, double amp) {
    require(length > 0.0, "Density1d: length must be positive");
    require(amp >= 0.0 && amp < 1.0, "Density1d: amp must lie in [0,1)");
    Density1d d;
    d.kind = Kind::sin_profile;
    d.length = length;
    d.amp = amp;
    return d;
}

Density1d Density1d::bump_mixture(double length, std::vector<double> centers,
                                  std::vector<double> weights, double radius) {
    require(length > 0.0, "Density1d: length must be positive");
    require(!centers.empty() && centers.size() == weights.size(),
            "Density1d: centers/weights mismatch");
    require(radius > 0.0 && 2.0 * radius < length, "Density1d: bump radius must fit the circle");
    double wsum = 0.0;
    for (double w : weights) {
        require(w > 0.0, "Density1d: weights must be positive");
        wsum += w;
    }
    for (double& w : weights) w /= wsum;
    Density1d d;
    d.kind = Kind::bump_mixture;
    d.length = length;
    d.centers = std::move(centers);
    d.weights = std::move(weights);
    d.radius = radius;
    d.norm = make_bump_kernel(1, radius).norm;
    return d;
}

Density1d Density1d::holder_profile(double length, double floor_frac, double hbeta) {
    require(length > 0.0, "Density1d: length must be positive");
    require(floor_frac > 0.0, "Density1d: floor must be positive");
    require(hbeta > 0.0 && hbeta <= 1.0, "Density1d: hbeta must lie in (0,1]");
    Density1d d;
    d.kind = Kind::holder_profile;
    d.length = length;
    d.floor_frac = floor_frac;
    d.hbeta = hbeta;
    // Normalization by quadrature; the |sin|^hbeta kinks cap the accuracy
    // around 1e-7, which only matters for pointwise eval (grids renormalize
    // and sampling is exact rejection).
    d.norm = simpson(0.0, length, 1 << 16, [&](double x) {
        return floor_frac + std::pow(std::fabs(std::sin(kTwoPi * x / length)), hbeta);
    });
    return d;
}

double Density1d::operator()(double x) const {
    switch (kind) {
        case Kind::uniform:
            return 1.0 / length;
        case Kind::wrapped_gaussian: {
            const int k_max = 1 + static_cast<int>(std::ceil(8.0 * sigma / length));
            double s = 0.0;
            for (int k = -k_max; k <= k_max; ++k) {
                const double z = (x - center + k * length) / sigma;
                s += std::exp(-0.5 * z * z);
            }
            return s * kInvSqrtTwoPi / sigma;
        }
        case Kind::sin_profile:
            return (1.0 + amp * std::sin(kTwoPi * x / length)) / length;
        case Kind::bump_mixture: {
            double s = 0.0;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                const double d = torus_delta(x, centers[i], length);
                if (std::fabs(d) < radius) {
                    const double u = (d * d) / (radius * radius);
                    s += weights[i] * norm * std::exp(-1.0 / (1.0 - u));
                }
            }
            return s;
        }
        case Kind::holder_profile:
            return (floor_frac + std::pow(std::fabs(std::sin(kTwoPi * x / length)), hbeta)) / norm;
    }
    return 0.0;
}

GridField Density1d::to_grid(int n) const {
    GridField f = GridField::zeros(1, n, length);
    for (int i = 0; i < n; ++i) f.values[i] = (*this)(f.node(i));
    const double mass = trapezoid_mass(f);
    for (double& v : f.values) v /= mass;
    return f;
}

double Density1d::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::uniform:
            return length * rng.uniform01();
        case Kind::wrapped_gaussian:
            return wrap_position(center + sigma * rng.normal(), length);
        case Kind::sin_profile: {
            // CDF F(x) = x/L + amp/(2 pi) (1 - cos(2 pi x / L)); density is
            // bounded below so safeguarded Newton converges from any start.
            const double u = rng.uniform01();
            double lo = 0.0, hi = length, x = u * length;
            for (int it = 0; it < 64; ++it) {
                const double f =
                    x / length + amp / kTwoPi * (1.0 - std::cos(kTwoPi * x / length)) - u;
                if (f > 0.0)
                    hi = x;
                else
                    lo = x;
                const double step = f / (*this)(x);
                double next = x - step;
                if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
                if (std::fabs(next - x) < 1e-15 * length) return next;
                x = next;
            }
            return x;
        }
        case Kind::bump_mixture: {
            // Pick a component, then reject against the flat envelope of the
            // bump profile (peak value e^{-1}).
            const double pick = rng.uniform01();
            double acc = 0.0;
            std::size_t comp = centers.size() - 1;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                acc += weights[i];
                if (pick <= acc) {
                    comp = i;
                    break;
                }
            }
            const double peak = std::exp(-1.0);
            for (;;) {
                const double d = radius * (2.0 * rng.uniform01() - 1.0);
                const double u = (d * d) / (radius * radius);
                if (peak * rng.uniform01() <= std::exp(-1.0 / (1.0 - u)))
                    return wrap_position(centers[comp] + d, length);
            }
        }
        case Kind::holder_profile: {
            // Exact rejection under the flat envelope floor + 1.
            const double envelope = floor_frac + 1.0;
            for (;;) {
                const double x = length * rng.uniform01();
                const double f =
                    floor_frac + std::pow(std::fabs(std::sin(kTwoPi * x / length)), hbeta);
                if (envelope * rng.uniform01() <= f) return x;
            }
        }
    }
    return 0.0;
}

InverseCdfSampler1d::InverseCdfSampler1d(const GridField& density, int table_size)
    : length_(density.length) {
    require(density.dim == 1, "InverseCdfSampler1d: density must be one-dimensional");
    require(table_size >= 16, "InverseCdfSampler1d: table too small");
    // Refine with periodic cubic interpolation, clamp stray negatives, then
    // accumulate a trapezoid CDF over the fine mesh.
    const double h = length_ / table_size;
    std::vector<double> fine(static_cast<std::size_t>(table_size) + 1);
    for (int i = 0; i <= table_size; ++i) {
        const double x = (i == table_size) ? 0.0 : i * h;
        fine[static_cast<std::size_t>(i)] = std::max(0.0, periodic_cubic_interp(density, &x));
    }
    cdf_.assign(static_cast<std::size_t>(table_size) + 1, 0.0);
    for (int i = 1; i <= table_size; ++i)
        cdf_[static_cast<std::size_t>(i)] =
            cdf_[static_cast<std::size_t>(i) - 1] +
            0.5 * h * (fine[static_cast<std::size_t>(i) - 1] + fine[static_cast<std::size_t>(i)]);
    const double total = cdf_.back();
    require(total > 0.0, "InverseCdfSampler1d: density integrates to zero");
    for (double& v : cdf_) v /= total;
    cdf_.back() = 1.0;
}

double InverseCdfSampler1d::sample(RngStream& rng) const {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
    const std::size_t i = (j == 0) ? 0 : j - 1;
    const double f0 = cdf_[i];
    const double f1 = cdf_[std::min(i + 1, cdf_.size() - 1)];
    const double h = length_ / (cdf_.size() - 1);
    const double frac = (f1 > f0) ? (u - f0) / (f1 - f0) : 0.5;
    double x = (static_cast<double>(i) + frac) * h;
    if (x >= length_) x -= length_;
    return x;
}

} // namespace mips
