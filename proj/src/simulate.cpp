#include "mips/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace mips {

namespace {

// Uniform draws one step consumes per particle: the subordinator takes two,
// each Box-Muller normal takes two.  Fixed consumption is what lets a stream
// be positioned at any step in O(1).
inline std::uint64_t uniforms_per_step(const StableNoiseConfig& noise) {
    const std::uint64_t normals = 2ULL * ((static_cast<std::uint64_t>(noise.dim) + 1) / 2);
    return (noise.alpha == 2.0) ? normals : normals + 2;
}

inline std::uint64_t label_of(const SimulationPlan& plan, long long i) {
    return plan.stream_labels.empty() ? static_cast<std::uint64_t>(i)
                                      : plan.stream_labels[static_cast<std::size_t>(i)];
}

long long step_count(const SimulationPlan& plan) {
    return static_cast<long long>(std::llround(plan.t_end / plan.dt));
}

} // namespace

void SimulationPlan::validate() const {
    noise.validate();
    require(noise.dim == 1, "SimulationPlan: particle runs are one-dimensional");
    require(static_cast<bool>(drift.eval), "SimulationPlan: drift eval missing");
    require(n_particles >= 1, "SimulationPlan: need at least one particle");
    require(kernel.n_particles == n_particles,
            "SimulationPlan: kernel scaled for a different particle count");
    require(dt > 0.0, "SimulationPlan: dt must be positive");
    require(t_end >= 0.0, "SimulationPlan: t_end must be nonnegative");
    require(domain_length > 0.0, "SimulationPlan: domain length must be positive");
    require(rho0.length == domain_length, "SimulationPlan: initial law lives on a different circle");
    const long long n_steps = step_count(*this);
    require(std::fabs(static_cast<double>(n_steps) * dt - t_end) <=
                1e-12 * std::max(1.0, std::fabs(t_end)),
            "SimulationPlan: t_end must be a multiple of dt");
    for (double s : snapshot_times) {
        const long long k = static_cast<long long>(std::llround(s / dt));
        require(k >= 0 && k <= n_steps && std::fabs(static_cast<double>(k) * dt - s) <= 1e-9,
                "SimulationPlan: snapshot times must sit on the step grid");
    }
    require(stream_labels.empty() ||
                stream_labels.size() == static_cast<std::size_t>(n_particles),
            "SimulationPlan: stream label list must match the particle count");
}

void step_euler(ParticleEnsemble& ensemble, const SimulationPlan& plan, long long step_index,
                double* u_out, double* dl1_out) {
    require(ensemble.count == plan.n_particles && ensemble.dim == 1,
            "step_euler: ensemble does not match the plan");
    require(step_index >= 0, "step_euler: negative step index");

    const long long n = ensemble.count;
    const double t = static_cast<double>(step_index) * plan.dt;
    const double dt = plan.dt;
    const double length = plan.domain_length;
    const std::uint64_t ups = uniforms_per_step(plan.noise);

    // Phase 1: density estimates for every particle from the frozen snapshot.
    std::vector<double> u_local;
    double* u = u_out;
    if (u == nullptr) {
        u_local.resize(static_cast<std::size_t>(n));
        u = u_local.data();
    }
    const CellList cl = build_cell_list(ensemble, plan.kernel.support_radius);
    kde_at_particles(cl, plan.kernel, u);

    // Phase 2: independent updates; per-particle streams are repositioned by
    // counter jumps, so thread order cannot matter.
    double max_drift = 0.0;
    double dl1 = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_drift) if (n >= 128)
    for (long long i = 0; i < n; ++i) {
        const double x = ensemble.pos[static_cast<std::size_t>(i)];
        const double b = plan.drift.eval(t, x, u[static_cast<std::size_t>(i)]);
        const double ab = std::fabs(b);
        if (ab > max_drift) max_drift = ab;
        RngStream s = derive_stream(plan.seed, StreamPurpose::noise, plan.rep, label_of(plan, i));
        s.skip(static_cast<std::uint64_t>(step_index) * ups);
        double dl;
        sample_stable_increment(s, plan.noise, dt, &dl);
        ensemble.pos[static_cast<std::size_t>(i)] = wrap_position(x + b * dt + dl, length);
        if (i == 0 && dl1_out != nullptr) dl1 = dl;
    }
    if (dl1_out != nullptr) *dl1_out = dl1;
    if (max_drift > plan.drift.kappa * (1.0 + 1e-9) + 1e-12) {
        char buf[112];
        std::snprintf(buf, sizeof(buf), "drift magnitude %.6g exceeded declared bound %.6g at t=%.6g",
                      max_drift, plan.drift.kappa, t);
        throw numeric_error(buf);
    }
    if (!std::isfinite(max_drift)) throw numeric_error("non-finite drift during step");
    for (long long i = 0; i < n; ++i)
        if (!std::isfinite(ensemble.pos[static_cast<std::size_t>(i)]))
            throw numeric_error("non-finite particle position after step");
    ensemble.time = static_cast<double>(step_index + 1) * dt;
}

SimulationResult simulate(const SimulationPlan& plan) {
    plan.validate();
    const long long n_steps = step_count(plan);

    ParticleEnsemble e = ParticleEnsemble::zeros(1, plan.n_particles, plan.domain_length);
    for (long long i = 0; i < plan.n_particles; ++i) {
        RngStream s = derive_stream(plan.seed, StreamPurpose::init, plan.rep, label_of(plan, i));
        e.pos[static_cast<std::size_t>(i)] = plan.rho0.sample(s);
    }
    e.time = 0.0;

    std::unordered_set<long long> snap_steps;
    for (double s : plan.snapshot_times)
        snap_steps.insert(static_cast<long long>(std::llround(s / plan.dt)));

    SimulationResult result;
    result.tape.dt = plan.dt;
    result.tape.alpha = plan.noise.alpha;
    if (plan.record_particle1) {
        result.tape.increments.reserve(static_cast<std::size_t>(n_steps));
        result.particle1_path.reserve(static_cast<std::size_t>(n_steps) + 1);
        result.particle1_path.push_back(e.pos[0]);
    }
    if (snap_steps.count(0)) result.snapshots.push_back(e);

    for (long long k = 0; k < n_steps; ++k) {
        double dl1 = 0.0;
        step_euler(e, plan, k, nullptr, plan.record_particle1 ? &dl1 : nullptr);
        if (plan.record_particle1) {
            result.tape.increments.push_back(dl1);
            result.particle1_path.push_back(e.pos[0]);
        }
        if (snap_steps.count(k + 1)) result.snapshots.push_back(e);
    }
    if (plan.snapshot_times.empty()) result.snapshots.push_back(e);
    return result;
}

std::vector<double> simulate_limit_sde(const DensityPath& rho_path, const DriftSpec& drift,
                                       const NoiseTape& tape, double x0) {
    require(!rho_path.fields.empty(), "simulate_limit_sde: empty density path");
    require(static_cast<bool>(drift.eval), "simulate_limit_sde: drift eval missing");
    require(tape.dt > 0.0, "simulate_limit_sde: tape has no step size");
    const double length = rho_path.fields.front().length;
    const long long n_steps = static_cast<long long>(tape.increments.size());
    require(static_cast<double>(n_steps) * tape.dt <= rho_path.times.back() + 1e-9,
            "simulate_limit_sde: density path does not cover the tape horizon");

    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(n_steps) + 1);
    double x = wrap_position(x0, length);
    path.push_back(x);
    for (long long k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * tape.dt;
        const double u = interpolate_density(rho_path, t, x);
        const double b = drift.eval(t, x, u);
        x = wrap_position(x + b * tape.dt + tape.increments[static_cast<std::size_t>(k)], length);
        path.push_back(x);
    }
    return path;
}

double pathwise_error(const std::vector<double>& path_a, const std::vector<double>& path_b,
                      double domain_length) {
    require(path_a.size() == path_b.size(), "pathwise_error: path length mismatch");
    require(!path_a.empty(), "pathwise_error: empty paths");
    require(domain_length > 0.0, "pathwise_error: domain length must be positive");
    double m = 0.0;
    for (std::size_t k = 0; k < path_a.size(); ++k) {
        const double d = std::fabs(torus_delta(path_a[k], path_b[k], domain_length));
        if (d > m) m = d;
    }
    return m;
}

} // namespace mips
