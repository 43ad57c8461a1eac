#include "mips/fpe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "mips/spectral.hpp"

namespace mips {

void FpeConfig::validate() const {
    noise.validate();
    require(grid.dim == 1, "FpeConfig: drift-driven solves are one-dimensional");
    require(noise.dim == grid.dim, "FpeConfig: noise/grid dimension mismatch");
    require(is_power_of_two(grid.n) && grid.n >= 8, "FpeConfig: grid n must be a power of two");
    require(grid.length > 0.0, "FpeConfig: domain length must be positive");
    require(dt_pde > 0.0, "FpeConfig: dt_pde must be positive");
    require(t_end >= 0.0, "FpeConfig: t_end must be nonnegative");
    require(static_cast<bool>(drift.eval), "FpeConfig: drift eval missing");
    if (t_end > 0.0) {
        // Same decay criterion as the kernel constructor, taken at the
        // horizon: by t_end the semigroup must have damped the Nyquist mode
        // below 1e-14, otherwise the grid cannot hold the solved density.
        require(heat_kernel_resolved(grid.n, grid.length, t_end, noise.alpha),
                "FpeConfig: grid cannot resolve the semigroup at this horizon");
    }
}

namespace {

struct StepScratch {
    SpectralWorkspace ws;
    std::vector<std::complex<double>> rho_hat, w_hat, f1_hat, work_hat;
    std::vector<double> rho_star, w;

    explicit StepScratch(const GridSpec& g)
        : ws(g.dim, g.n, g.length),
          rho_hat(ws.spectrum_size()),
          w_hat(ws.spectrum_size()),
          f1_hat(ws.spectrum_size()),
          work_hat(ws.spectrum_size()),
          rho_star(ws.real_size()),
          w(ws.real_size()) {}
};

// F_hat = dealiased spectrum of div(b(t,x,rho) rho) from physical rho values.
void transport_spectrum(StepScratch& s, const FpeConfig& cfg, const double* rho, double t,
                        std::vector<std::complex<double>>& out) {
    const int n = s.ws.n();
    const double h = s.ws.length() / n;
    for (int i = 0; i < n; ++i) {
        const double u = rho[i] < 0.0 ? 0.0 : rho[i];
        s.w[i] = cfg.drift.eval(t, i * h, u) * rho[i];
    }
    s.ws.forward(s.w.data(), out.data());
    s.ws.apply_derivative(out.data(), 0);
    if (cfg.dealias) s.ws.dealias(out.data());
}

void step_inplace(StepScratch& s, const FpeConfig& cfg, const std::vector<double>& rho_in,
                  double t, std::vector<double>& rho_out) {
    const double dt = cfg.dt_pde;
    const std::size_t m = s.ws.spectrum_size();

    s.ws.forward(rho_in.data(), s.rho_hat.data());
    transport_spectrum(s, cfg, rho_in.data(), t, s.f1_hat);

    // predictor: rho* = P_dt (rho - dt F(rho))
    for (std::size_t k = 0; k < m; ++k) s.work_hat[k] = s.rho_hat[k] - dt * s.f1_hat[k];
    s.ws.apply_stable_multiplier(s.work_hat.data(), dt, cfg.noise.alpha);
    s.ws.inverse(s.work_hat.data(), s.rho_star.data());

    transport_spectrum(s, cfg, s.rho_star.data(), t + dt, s.w_hat);

    // corrector: rho+ = P_dt (rho - dt/2 F(rho)) - dt/2 F(rho*)
    for (std::size_t k = 0; k < m; ++k) s.work_hat[k] = s.rho_hat[k] - 0.5 * dt * s.f1_hat[k];
    s.ws.apply_stable_multiplier(s.work_hat.data(), dt, cfg.noise.alpha);
    for (std::size_t k = 0; k < m; ++k) s.work_hat[k] -= 0.5 * dt * s.w_hat[k];
    s.ws.inverse(s.work_hat.data(), rho_out.data());
}

} // namespace

GridField step_duhamel(const FpeConfig& cfg, const GridField& rho, double t) {
    cfg.validate();
    require(rho.dim == cfg.grid.dim && rho.n == cfg.grid.n, "step_duhamel: field/grid mismatch");
    StepScratch s(cfg.grid);
    GridField out = GridField::zeros(rho.dim, rho.n, rho.length);
    step_inplace(s, cfg, rho.values, t, out.values);
    if (!all_finite(out)) throw numeric_error("density step produced non-finite values");
    return out;
}

DensityPath solve_fpe(const FpeConfig& cfg, const GridField& rho0) {
    cfg.validate();
    require(rho0.dim == cfg.grid.dim && rho0.n == cfg.grid.n, "solve_fpe: field/grid mismatch");
    const double mass0 = trapezoid_mass(rho0);
    require(std::fabs(mass0 - 1.0) <= 1e-8, "solve_fpe: initial mass must be 1");
    require(min_value(rho0) >= -1e-12, "solve_fpe: initial density must be nonnegative");

    const long long n_steps = static_cast<long long>(std::llround(cfg.t_end / cfg.dt_pde));
    require(std::fabs(n_steps * cfg.dt_pde - cfg.t_end) <= 1e-9,
            "solve_fpe: t_end must be a multiple of dt_pde");

    DensityPath path;
    path.dt = cfg.dt_pde;
    path.times.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.fields.reserve(static_cast<std::size_t>(n_steps) + 1);
    path.times.push_back(0.0);
    path.fields.push_back(rho0);

    StepScratch s(cfg.grid);
    GridField cur = rho0;
    GridField next = GridField::zeros(rho0.dim, rho0.n, rho0.length);
    for (long long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt_pde;
        step_inplace(s, cfg, cur.values, t, next.values);
        if (!all_finite(next)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "density solve blew up at t = %.6g", t + cfg.dt_pde);
            throw numeric_error(buf);
        }
        const double mass = trapezoid_mass(next);
        if (std::fabs(mass - 1.0) > 1e-6) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "density mass drifted to %.12g at t = %.6g", mass,
                          t + cfg.dt_pde);
            throw numeric_error(buf);
        }
        cur.values.swap(next.values);
        path.times.push_back(static_cast<double>(k + 1) * cfg.dt_pde);
        path.fields.push_back(cur);
    }
    return path;
}

double interpolate_density(const DensityPath& path, double t, double x) {
    require(!path.fields.empty(), "interpolate_density: empty path");
    const double t_max = path.times.back();
    require(t >= -1e-12 && t <= t_max + 1e-9, "interpolate_density: t outside the solved range");
    if (t < 0.0) t = 0.0;
    if (t > t_max) t = t_max;

    double value;
    if (path.fields.size() == 1 || path.dt <= 0.0) {
        value = periodic_cubic_interp(path.fields.front(), &x);
    } else {
        double s = t / path.dt;
        std::size_t k = static_cast<std::size_t>(s);
        if (k >= path.fields.size() - 1) k = path.fields.size() - 2;
        const double frac = s - static_cast<double>(k);
        const double v0 = periodic_cubic_interp(path.fields[k], &x);
        const double v1 = periodic_cubic_interp(path.fields[k + 1], &x);
        value = (1.0 - frac) * v0 + frac * v1;
    }
    return value < 0.0 ? 0.0 : value;
}

double self_convergence_factor(const FpeConfig& cfg, const GridField& rho0) {
    FpeConfig half = cfg;
    half.dt_pde = 0.5 * cfg.dt_pde;
    FpeConfig quarter = cfg;
    quarter.dt_pde = 0.25 * cfg.dt_pde;
    const GridField a = solve_fpe(cfg, rho0).fields.back();
    const GridField b = solve_fpe(half, rho0).fields.back();
    const GridField c = solve_fpe(quarter, rho0).fields.back();
    const double coarse = sup_diff(a, b);
    const double fine = sup_diff(b, c);
    require(fine > 0.0, "self_convergence_factor: refinement error vanished");
    return coarse / fine;
}

DensityDiagnostics diagnostics_density_estimates(const DensityPath& path, double p, double beta,
                                                 double flag_constant) {
    require(!path.fields.empty(), "diagnostics: empty path");
    require(p >= 1.0, "diagnostics: p must be >= 1");
    require(beta > 0.0 && beta <= 1.0, "diagnostics: beta must lie in (0,1]");
    require(flag_constant > 0.0, "diagnostics: flag constant must be positive");

    DensityDiagnostics d;
    const std::size_t m = path.fields.size();
    d.times = path.times;
    d.sup_norm.resize(m);
    d.lp_norm.resize(m);
    d.holder_quotient.resize(m);
    d.min_value.resize(m);
    d.mass.resize(m);
    d.boundary_mass.resize(m);

    for (std::size_t k = 0; k < m; ++k) {
        const GridField& f = path.fields[k];
        const int n = f.n;
        const double h = f.spacing();
        d.sup_norm[k] = sup_abs(f);
        d.lp_norm[k] = lp_norm(f, p);
        d.min_value[k] = min_value(f);
        d.mass[k] = trapezoid_mass(f);
        double quot = 0.0;
        const double inv_hb = 1.0 / std::pow(h, beta);
        for (int i = 0; i < n; ++i) {
            const double diff = std::fabs(f.values[(i + 1) % n] - f.values[i]);
            if (diff * inv_hb > quot) quot = diff * inv_hb;
        }
        d.holder_quotient[k] = quot;
        // Mass in [0, L/4] plus [3L/4, L): how much of the density sits near
        // the periodic seam, i.e. how faithful the torus restatement is.
        double bm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            if (x <= 0.25 * f.length || x >= 0.75 * f.length)
                bm += std::fabs(f.values[i]);
        }
        d.boundary_mass[k] = bm * h;
    }

    const double sup0 = d.sup_norm.front() > 0.0 ? d.sup_norm.front() : 1.0;
    const double hold0 = d.holder_quotient.front() > 0.0 ? d.holder_quotient.front() : 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        d.max_sup_ratio = std::max(d.max_sup_ratio, d.sup_norm[k] / sup0);
        d.max_holder_ratio = std::max(d.max_holder_ratio, d.holder_quotient[k] / hold0);
        if (d.boundary_mass[k] > 1e-8) d.boundary_flag = true;
    }
    d.sup_flag = d.max_sup_ratio > flag_constant;
    d.holder_flag = d.max_holder_ratio > flag_constant;
    return d;
}

} // namespace mips
