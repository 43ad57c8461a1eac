#include "mips/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "mips/cell_kde.hpp"
#include "mips/errors.hpp"
#include "mips/fpe.hpp"
#include "mips/io.hpp"
#include "mips/mollifier.hpp"
#include "mips/reference.hpp"
#include "mips/scenarios.hpp"
#include "mips/simulate.hpp"

#ifndef MIPS_GIT_HASH
#define MIPS_GIT_HASH "unknown"
#endif

namespace mips {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

constexpr double kDriftProbeUMax = 25.0;  // covers kernel sups up to N = 2^14, theta = 1/4
constexpr int kDriftProbeChecks = 10000;

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(fs::is_directory(dir), "cannot create output directory: " + dir);
}

std::vector<double> parse_number_list(const json& v, const char* key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    require(v.is_array() && !v.empty(),
            std::string("config key '") + key + "' must be a number or a nonempty list");
    for (const auto& e : v) {
        require(e.is_number(), std::string("config key '") + key + "' holds a non-number");
        out.push_back(e.get<double>());
    }
    return out;
}

double elapsed_seconds(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Job failures must not unwind through the parallel region; they are stored
// per slot and the first one (in job order) is rethrown with context.
struct JobFailures {
    std::vector<char> kind;
    std::vector<std::string> message;

    explicit JobFailures(std::size_t jobs) : kind(jobs, ' '), message(jobs) {}

    template <typename Fn>
    void guarded(std::size_t job, Fn&& fn) {
        try {
            fn();
        } catch (const validation_error& e) {
            kind[job] = 'v';
            message[job] = e.what();
        } catch (const numeric_error& e) {
            kind[job] = 'n';
            message[job] = e.what();
        } catch (const std::exception& e) {
            kind[job] = 'n';
            message[job] = e.what();
        }
    }

    void rethrow_first(const std::string& scenario, const std::vector<long long>& n_of_job,
                       const std::vector<long long>& rep_of_job, std::uint64_t seed) const {
        for (std::size_t j = 0; j < kind.size(); ++j) {
            if (kind[j] == ' ') continue;
            char buf[160];
            std::snprintf(buf, sizeof(buf), "scenario=%s N=%lld rep=%lld seed=%llu: ",
                          scenario.c_str(), n_of_job[j], rep_of_job[j],
                          static_cast<unsigned long long>(seed));
            if (kind[j] == 'v') throw validation_error(buf + message[j]);
            throw numeric_error(buf + message[j]);
        }
    }
};

ScenarioSpec checked_scenario(const ExperimentConfig& cfg) {
    ScenarioSpec s = make_scenario(cfg.scenario, cfg.domain_length);
    validate_drift_hypothesis(s.drift, cfg.domain_length, kDriftProbeUMax, kDriftProbeChecks,
                              cfg.seed);
    return s;
}

int scenario_id_of(const std::string& name) {
    const std::vector<std::string> names = scenario_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

DensityPath solve_reference(const ExperimentConfig& cfg, const ScenarioSpec& scenario,
                            double alpha) {
    FpeConfig fc;
    fc.noise.alpha = alpha;
    fc.noise.dim = 1;
    fc.drift = scenario.drift;
    fc.grid = GridSpec{1, cfg.grid_n, cfg.domain_length};
    fc.dt_pde = cfg.dt_pde;
    fc.t_end = cfg.t_end;
    return solve_fpe(fc, scenario.rho0.to_grid(cfg.grid_n));
}

// Recorded frame when t sits on the solver grid, pointwise interpolation
// otherwise.
GridField frame_at(const DensityPath& path, double t) {
    require(!path.fields.empty(), "empty density path");
    const double t0 = path.times.front();
    const long long k = std::llround((t - t0) / path.dt);
    if (k >= 0 && k < static_cast<long long>(path.fields.size()) &&
        std::abs(t0 + static_cast<double>(k) * path.dt - t) <= 1e-9 * std::max(1.0, std::abs(t)))
        return path.fields[static_cast<std::size_t>(k)];
    GridField g = path.fields.front();
    for (int i = 0; i < g.n; ++i)
        g.values[static_cast<std::size_t>(i)] = interpolate_density(path, t, g.node(i));
    return g;
}

// Mean count of particles within the kernel support, over up to 1024 probe
// particles; integer summands, so the value is order-independent.
double avg_neighbor_count(const ParticleEnsemble& e, double radius) {
    const long long nq = std::min<long long>(e.count, 1024);
    const double r2 = radius * radius;
    long long acc = 0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (long long i = 0; i < nq; ++i) {
        long long c = 0;
        for (long long j = 0; j < e.count; ++j)
            if (torus_dist2(e.particle(i), e.particle(j), e.dim, e.length) <= r2) ++c;
        acc += c;
    }
    return static_cast<double>(acc) / static_cast<double>(nq);
}

ordered_json config_echo(const ExperimentConfig& cfg, double alpha_used) {
    ordered_json j;
    j["scenario"] = cfg.scenario;
    j["alpha"] = alpha_used;
    j["alpha_list"] = cfg.alphas;
    j["theta"] = cfg.theta;
    j["m"] = cfg.m_list;
    j["n_list"] = cfg.n_list;
    j["replications"] = cfg.replications;
    j["dt"] = cfg.dt;
    j["dt_pde"] = cfg.dt_pde;
    j["t_end"] = cfg.t_end;
    j["snapshot_times"] = cfg.snapshots_or_final();
    j["grid_n"] = cfg.grid_n;
    j["domain_length"] = cfg.domain_length;
    j["seed"] = cfg.seed;
    j["bump_radius"] = cfg.bump_radius;
    return j;
}

ordered_json fit_json(const FitEntry& f) {
    ordered_json j;
    j["m"] = f.m;
    j["t"] = f.t;
    j["slope"] = f.fit.slope;
    j["intercept"] = f.fit.intercept;
    j["r_squared"] = f.fit.r_squared;
    j["n_points"] = f.fit.n_points;
    j["theoretical_slope"] = f.fit.theoretical_slope;
    return j;
}

ordered_json aggregate_json(const AggregateEntry& a) {
    ordered_json j;
    j["m"] = a.m;
    j["t"] = a.t;
    j["n"] = a.n_particles;
    j["value"] = a.est.value;
    j["bootstrap_se"] = a.est.bootstrap_se;
    return j;
}

void write_timings(const std::string& path, const std::string& command,
                   const std::vector<long long>& n_list, const std::vector<double>& seconds,
                   double total) {
    ordered_json j;
    j["command"] = command;
    ordered_json per = ordered_json::array();
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        ordered_json e;
        e["n"] = n_list[i];
        e["seconds"] = seconds[i];
        per.push_back(e);
    }
    j["seconds_per_n"] = per;
    j["total_seconds"] = total;
    write_json_file(path, j);
}

ConvergenceResult convergence_impl(const ExperimentConfig& cfg, double alpha,
                                   const ScenarioSpec& scenario, const std::string& tag) {
    const auto wall_start = clock_type::now();
    const std::vector<double> snaps = cfg.snapshots_or_final();
    const DensityPath path = solve_reference(cfg, scenario, alpha);

    std::vector<GridField> refs;
    refs.reserve(snaps.size());
    for (double t : snaps) refs.push_back(frame_at(path, t));

    const BumpKernel base = make_bump_kernel(1, cfg.bump_radius);
    std::vector<ScaledKernel> kernels;
    for (long long n : cfg.n_list) kernels.push_back(scale_kernel(base, n, cfg.theta));

    const std::size_t n_n = cfg.n_list.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t n_s = snaps.size();
    const std::size_t jobs = n_n * reps;

    std::vector<double> vals(jobs * n_s, 0.0);
    std::vector<ParticleEnsemble> probe(n_n);
    std::vector<double> seconds(n_n, 0.0);
    std::vector<long long> n_of_job(jobs), rep_of_job(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
        n_of_job[j] = cfg.n_list[j / reps];
        rep_of_job[j] = static_cast<long long>(j % reps);
    }
    JobFailures failures(jobs);

#pragma omp parallel for schedule(dynamic)
    for (long long job = 0; job < static_cast<long long>(jobs); ++job) {
        failures.guarded(static_cast<std::size_t>(job), [&] {
            const std::size_t ni = static_cast<std::size_t>(job) / reps;
            const std::size_t rep = static_cast<std::size_t>(job) % reps;
            const auto t0 = clock_type::now();

            SimulationPlan plan;
            plan.noise.alpha = alpha;
            plan.noise.dim = 1;
            plan.drift = scenario.drift;
            plan.kernel = kernels[ni];
            plan.rho0 = scenario.rho0;
            plan.n_particles = cfg.n_list[ni];
            plan.dt = cfg.dt;
            plan.t_end = cfg.t_end;
            plan.domain_length = cfg.domain_length;
            plan.seed = cfg.seed;
            plan.rep = rep;
            plan.snapshot_times = snaps;
            SimulationResult sr = simulate(plan);

            for (std::size_t s = 0; s < n_s; ++s)
                vals[static_cast<std::size_t>(job) * n_s + s] =
                    density_sup_error(refs[s], sr.snapshots[s], kernels[ni]);
            if (rep == 0) probe[ni] = std::move(sr.snapshots.back());

            const double dt_s = elapsed_seconds(t0);
#pragma omp atomic
            seconds[ni] += dt_s;
        });
    }
    failures.rethrow_first(scenario.name, n_of_job, rep_of_job, cfg.seed);

    ConvergenceResult out;
    out.beta_eff = scenario.drift.beta;
    for (std::size_t ni = 0; ni < n_n; ++ni)
        for (std::size_t rep = 0; rep < reps; ++rep)
            for (std::size_t s = 0; s < n_s; ++s)
                out.table.records.push_back({scenario.name, alpha, cfg.theta, scenario.drift.beta,
                                             cfg.n_list[ni], static_cast<long long>(rep), snaps[s],
                                             "density_sup",
                                             vals[(ni * reps + rep) * n_s + s], cfg.seed});

    const double theo = theoretical_rate_slope(cfg.theta, scenario.drift.beta, 1);
    for (int m : cfg.m_list)
        for (std::size_t s = 0; s < n_s; ++s) {
            std::vector<double> per_n;
            for (std::size_t ni = 0; ni < n_n; ++ni) {
                std::vector<double> rep_vals(reps);
                for (std::size_t rep = 0; rep < reps; ++rep)
                    rep_vals[rep] = vals[(ni * reps + rep) * n_s + s];
                const std::uint64_t lm_seed =
                    derive_key(cfg.seed, (static_cast<std::uint64_t>(ni) << 8) | s,
                               static_cast<std::uint64_t>(m));
                LmEstimate est = lm_omega_norm(rep_vals, m, lm_seed);
                out.aggregates.push_back({m, snaps[s], cfg.n_list[ni], est});
                per_n.push_back(est.value);
            }
            if (n_n >= 3) out.fits.push_back({m, snaps[s], fit_rate(cfg.n_list, per_n, theo)});
        }
    if (!out.fits.empty()) out.headline = out.fits.back().fit;

    for (std::size_t ni = 0; ni < n_n; ++ni)
        out.avg_neighbors.emplace_back(
            cfg.n_list[ni], avg_neighbor_count(probe[ni], kernels[ni].support_radius));

    ensure_out_dir(cfg.out_dir);
    write_error_csv(cfg.out_dir + "/errors_density_sup" + tag + ".csv", out.table);

    ordered_json summary;
    summary["command"] = "convergence";
    summary["git_hash"] = MIPS_GIT_HASH;
    summary["config"] = config_echo(cfg, alpha);
    summary["beta_eff"] = out.beta_eff;
    summary["theoretical_slope"] = theo;
    ordered_json fits = ordered_json::array();
    for (const FitEntry& f : out.fits) fits.push_back(fit_json(f));
    summary["fits"] = fits;
    ordered_json aggs = ordered_json::array();
    for (const AggregateEntry& a : out.aggregates) aggs.push_back(aggregate_json(a));
    summary["aggregates"] = aggs;
    ordered_json nb = ordered_json::array();
    for (const auto& [n, v] : out.avg_neighbors) {
        ordered_json e;
        e["n"] = n;
        e["value"] = v;
        nb.push_back(e);
    }
    summary["resource"] = ordered_json{{"avg_neighbors", nb}};
    summary["scenario_notes"] = scenario.notes;
    write_json_file(cfg.out_dir + "/summary_convergence" + tag + ".json", summary);
    write_timings(cfg.out_dir + "/timings" + tag + ".json", "convergence", cfg.n_list, seconds,
                  elapsed_seconds(wall_start));

    if (cfg.dump_density) {
        DensityMeta meta{alpha, cfg.domain_length, cfg.grid_n, cfg.dt_pde,
                         scenario_id_of(scenario.name)};
        write_density_csv(cfg.out_dir + "/density_path" + tag + ".csv", path, meta);
        write_density_binary(cfg.out_dir + "/density_path" + tag + ".bin", path, meta);
    }
    if (cfg.dump_particles && !probe.empty()) {
        ParticleCsvMeta meta{cfg.t_end, cfg.n_list.front(), 1,     cfg.domain_length,
                             alpha,     cfg.theta,           cfg.seed};
        write_particle_csv(cfg.out_dir + "/particles_final" + tag + ".csv", probe.front(), meta);
    }
    return out;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    require(j.is_object(), "config must be a JSON object");

    static const std::vector<std::string> keys = {
        "scenario", "alpha",          "theta",  "m",
        "n_list",   "replications",   "dt",     "dt_pde",
        "t_end",    "snapshot_times", "grid_n", "domain_length",
        "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        require(std::find(keys.begin(), keys.end(), it.key()) != keys.end(),
                "unknown config key: " + it.key());
    for (const std::string& k : keys) require(j.contains(k), "missing config key: " + k);

    ExperimentConfig cfg;
    try {
        cfg.scenario = j.at("scenario").get<std::string>();
        cfg.alphas = parse_number_list(j.at("alpha"), "alpha");
        cfg.theta = j.at("theta").get<double>();
        for (double v : parse_number_list(j.at("m"), "m")) {
            require(v == std::floor(v) && v >= 1.0 && v <= 64.0,
                    "config key 'm' must hold small positive integers");
            cfg.m_list.push_back(static_cast<int>(v));
        }
        const json& nl = j.at("n_list");
        require(nl.is_array() && !nl.empty(), "config key 'n_list' must be a nonempty list");
        for (const auto& e : nl) {
            require(e.is_number_integer(), "config key 'n_list' holds a non-integer");
            cfg.n_list.push_back(e.get<long long>());
        }
        cfg.replications = j.at("replications").get<int>();
        cfg.dt = j.at("dt").get<double>();
        cfg.dt_pde = j.at("dt_pde").get<double>();
        cfg.t_end = j.at("t_end").get<double>();
        const json& st = j.at("snapshot_times");
        require(st.is_array(), "config key 'snapshot_times' must be a list");
        for (const auto& e : st) {
            require(e.is_number(), "config key 'snapshot_times' holds a non-number");
            cfg.snapshot_times.push_back(e.get<double>());
        }
        cfg.grid_n = j.at("grid_n").get<int>();
        cfg.domain_length = j.at("domain_length").get<double>();
        const json& sd = j.at("seed");
        require(sd.is_number_integer() || sd.is_number_unsigned(),
                "config key 'seed' must be an integer");
        if (sd.is_number_unsigned())
            cfg.seed = sd.get<std::uint64_t>();
        else {
            const long long s = sd.get<long long>();
            require(s >= 0, "config key 'seed' must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        }
    } catch (const json::exception& e) {
        throw validation_error(std::string("config type error: ") + e.what());
    }
    return cfg;
}

void ExperimentConfig::validate() const {
    const std::vector<std::string> names = scenario_names();
    require(std::find(names.begin(), names.end(), scenario) != names.end(),
            "unknown scenario: " + scenario);
    require(!alphas.empty(), "alpha list is empty");
    for (double a : alphas) require(a > 1.0 && a <= 2.0, "alpha must lie in (1, 2]");
    require(theta > 0.0 && theta < 0.5, "theta outside (0, 1/2)");
    require(!m_list.empty(), "m list is empty");
    for (int m : m_list) require(m >= 1, "moment order must be >= 1");
    require(!n_list.empty(), "n_list is empty");
    require(n_list.front() > 0, "particle counts must be positive");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        require(n_list[i] > n_list[i - 1], "n_list must be strictly increasing");
    require(replications >= 1, "replications must be >= 1");
    require(dt > 0.0 && dt_pde > 0.0 && t_end > 0.0, "dt, dt_pde, t_end must be positive");
    const long long steps = std::llround(t_end / dt);
    require(steps >= 1 &&
                std::abs(static_cast<double>(steps) * dt - t_end) <= 1e-9 * std::max(1.0, t_end),
            "t_end must be a whole number of particle steps");
    double prev = 0.0;
    for (double t : snapshot_times) {
        require(t > 0.0 && t <= t_end * (1.0 + 1e-12), "snapshot times must lie in (0, t_end]");
        require(t > prev, "snapshot times must be strictly increasing");
        const long long k = std::llround(t / dt);
        require(std::abs(static_cast<double>(k) * dt - t) <= 1e-9,
                "snapshot times must lie on the particle step grid");
        prev = t;
    }
    require(grid_n >= 8 && is_power_of_two(grid_n), "grid_n must be a power of two >= 8");
    require(domain_length > 0.0, "domain_length must be positive");
    require(bump_radius > 0.0 && bump_radius < 0.5 * domain_length,
            "bump radius must lie in (0, L/2)");
    require(threads >= 0, "thread budget must be >= 0");
}

std::vector<double> ExperimentConfig::snapshots_or_final() const {
    if (!snapshot_times.empty()) return snapshot_times;
    return {t_end};
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    require(cfg.alphas.size() == 1, "convergence run expects a single alpha");
    const ScenarioSpec scenario = checked_scenario(cfg);
    return convergence_impl(cfg, cfg.alphas.front(), scenario, "");
}

PathwiseResult run_pathwise(const ExperimentConfig& cfg) {
    cfg.validate();
    require(cfg.alphas.size() == 1, "pathwise run expects a single alpha");
    const double alpha = cfg.alphas.front();
    const ScenarioSpec scenario = checked_scenario(cfg);
    const double regularity = std::min(scenario.rho0_holder, scenario.drift.beta);
    require(regularity > 1.0 - alpha / 2.0,
            "pathwise run requires scenario regularity beta > 1 - alpha/2");

    const auto wall_start = clock_type::now();
    const DensityPath path = solve_reference(cfg, scenario, alpha);

    const BumpKernel base = make_bump_kernel(1, cfg.bump_radius);
    std::vector<ScaledKernel> kernels;
    for (long long n : cfg.n_list) kernels.push_back(scale_kernel(base, n, cfg.theta));

    const std::size_t n_n = cfg.n_list.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    const std::size_t jobs = n_n * reps;
    std::vector<double> vals(jobs, 0.0);
    std::vector<double> seconds(n_n, 0.0);
    std::vector<long long> n_of_job(jobs), rep_of_job(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
        n_of_job[j] = cfg.n_list[j / reps];
        rep_of_job[j] = static_cast<long long>(j % reps);
    }
    JobFailures failures(jobs);

#pragma omp parallel for schedule(dynamic)
    for (long long job = 0; job < static_cast<long long>(jobs); ++job) {
        failures.guarded(static_cast<std::size_t>(job), [&] {
            const std::size_t ni = static_cast<std::size_t>(job) / reps;
            const std::size_t rep = static_cast<std::size_t>(job) % reps;
            const auto t0 = clock_type::now();

            SimulationPlan plan;
            plan.noise.alpha = alpha;
            plan.noise.dim = 1;
            plan.drift = scenario.drift;
            plan.kernel = kernels[ni];
            plan.rho0 = scenario.rho0;
            plan.n_particles = cfg.n_list[ni];
            plan.dt = cfg.dt;
            plan.t_end = cfg.t_end;
            plan.domain_length = cfg.domain_length;
            plan.seed = cfg.seed;
            plan.rep = rep;
            plan.record_particle1 = true;
            SimulationResult sr = simulate(plan);
            require(!sr.tape.increments.empty(), "missing noise tape");

            const double x0 = sr.particle1_path.front();
            const std::vector<double> limit =
                simulate_limit_sde(path, scenario.drift, sr.tape, x0);
            vals[static_cast<std::size_t>(job)] =
                pathwise_error(sr.particle1_path, limit, cfg.domain_length);

            const double dt_s = elapsed_seconds(t0);
#pragma omp atomic
            seconds[ni] += dt_s;
        });
    }
    failures.rethrow_first(scenario.name, n_of_job, rep_of_job, cfg.seed);

    PathwiseResult out;
    for (std::size_t ni = 0; ni < n_n; ++ni)
        for (std::size_t rep = 0; rep < reps; ++rep)
            out.table.records.push_back({scenario.name, alpha, cfg.theta, scenario.drift.beta,
                                         cfg.n_list[ni], static_cast<long long>(rep), cfg.t_end,
                                         "pathwise", vals[ni * reps + rep], cfg.seed});

    const double theo = theoretical_rate_slope(cfg.theta, scenario.drift.beta, 1);
    for (int m : cfg.m_list) {
        std::vector<double> per_n;
        bool all_positive = true;
        for (std::size_t ni = 0; ni < n_n; ++ni) {
            std::vector<double> rep_vals(vals.begin() + static_cast<long long>(ni * reps),
                                         vals.begin() + static_cast<long long>((ni + 1) * reps));
            LmEstimate est = lm_omega_norm(
                rep_vals, m, derive_key(cfg.seed, ni, static_cast<std::uint64_t>(m)));
            out.aggregates.push_back({m, cfg.t_end, cfg.n_list[ni], est});
            per_n.push_back(est.value);
            all_positive = all_positive && est.value > 0.0;
        }
        if (all_positive && n_n >= 3)
            out.fits.push_back({m, cfg.t_end, fit_rate(cfg.n_list, per_n, theo)});
    }
    if (!out.fits.empty()) out.headline = out.fits.back().fit;
    for (std::size_t ni = 0; ni < n_n; ++ni) {
        std::vector<double> rep_vals(vals.begin() + static_cast<long long>(ni * reps),
                                     vals.begin() + static_cast<long long>((ni + 1) * reps));
        out.medians.emplace_back(cfg.n_list[ni], median_of(std::move(rep_vals)));
    }

    ensure_out_dir(cfg.out_dir);
    write_error_csv(cfg.out_dir + "/errors_pathwise.csv", out.table);
    ordered_json summary;
    summary["command"] = "pathwise";
    summary["git_hash"] = MIPS_GIT_HASH;
    summary["config"] = config_echo(cfg, alpha);
    summary["regularity"] = regularity;
    summary["theoretical_slope"] = theo;
    ordered_json meds = ordered_json::array();
    for (const auto& [n, v] : out.medians) {
        ordered_json e;
        e["n"] = n;
        e["median"] = v;
        meds.push_back(e);
    }
    summary["medians"] = meds;
    ordered_json aggs = ordered_json::array();
    for (const AggregateEntry& a : out.aggregates) aggs.push_back(aggregate_json(a));
    summary["aggregates"] = aggs;
    ordered_json fits = ordered_json::array();
    for (const FitEntry& f : out.fits) fits.push_back(fit_json(f));
    summary["fits"] = fits;
    summary["scenario_notes"] = scenario.notes;
    write_json_file(cfg.out_dir + "/summary_pathwise.json", summary);
    write_timings(cfg.out_dir + "/timings.json", "pathwise", cfg.n_list, seconds,
                  elapsed_seconds(wall_start));
    return out;
}

WeakResult run_weak(const ExperimentConfig& cfg) {
    cfg.validate();
    require(cfg.alphas.size() == 1, "weak run expects a single alpha");
    require(cfg.replications >= 1000,
            "weak run needs >= 1000 replications (one sample each) for the distance estimate");
    const double alpha = cfg.alphas.front();
    const ScenarioSpec scenario = checked_scenario(cfg);

    const auto wall_start = clock_type::now();
    const DensityPath path = solve_reference(cfg, scenario, alpha);
    const GridField ref = frame_at(path, cfg.t_end);

    const BumpKernel base = make_bump_kernel(1, cfg.bump_radius);
    const std::size_t n_n = cfg.n_list.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.replications);
    std::vector<double> seconds(n_n, 0.0);

    WeakResult out;
    for (std::size_t ni = 0; ni < n_n; ++ni) {
        const ScaledKernel kernel = scale_kernel(base, cfg.n_list[ni], cfg.theta);
        std::vector<double> samples(reps, 0.0);
        std::vector<long long> n_of_job(reps, cfg.n_list[ni]), rep_of_job(reps);
        for (std::size_t r = 0; r < reps; ++r) rep_of_job[r] = static_cast<long long>(r);
        JobFailures failures(reps);
        const auto t0 = clock_type::now();

#pragma omp parallel for schedule(dynamic)
        for (long long rep = 0; rep < static_cast<long long>(reps); ++rep) {
            failures.guarded(static_cast<std::size_t>(rep), [&] {
                SimulationPlan plan;
                plan.noise.alpha = alpha;
                plan.noise.dim = 1;
                plan.drift = scenario.drift;
                plan.kernel = kernel;
                plan.rho0 = scenario.rho0;
                plan.n_particles = cfg.n_list[ni];
                plan.dt = cfg.dt;
                plan.t_end = cfg.t_end;
                plan.domain_length = cfg.domain_length;
                plan.seed = cfg.seed;
                plan.rep = static_cast<std::uint64_t>(rep);
                SimulationResult sr = simulate(plan);
                samples[static_cast<std::size_t>(rep)] = sr.snapshots.back().particle(0)[0];
            });
        }
        failures.rethrow_first(scenario.name, n_of_job, rep_of_job, cfg.seed);
        seconds[ni] = elapsed_seconds(t0);

        const TvEstimate tv =
            tv_error(samples, ref, derive_key(cfg.seed, 0x7476u, static_cast<std::uint64_t>(ni)));
        out.estimates.emplace_back(cfg.n_list[ni], tv);
        out.table.records.push_back({scenario.name, alpha, cfg.theta, scenario.drift.beta,
                                     cfg.n_list[ni], -1, cfg.t_end, "tv", tv.value, cfg.seed});
    }

    const TvEstimate& first = out.estimates.front().second;
    const TvEstimate& last = out.estimates.back().second;
    out.decrease = first.value - last.value;
    out.band_max = std::max(first.band_hi - first.band_lo, last.band_hi - last.band_lo);
    out.trend_beyond_band = out.estimates.size() >= 2 && out.decrease > out.band_max;

    ensure_out_dir(cfg.out_dir);
    write_error_csv(cfg.out_dir + "/errors_tv.csv", out.table);
    ordered_json summary;
    summary["command"] = "weak";
    summary["git_hash"] = MIPS_GIT_HASH;
    summary["config"] = config_echo(cfg, alpha);
    ordered_json ests = ordered_json::array();
    for (const auto& [n, tv] : out.estimates) {
        ordered_json e;
        e["n"] = n;
        e["value"] = tv.value;
        e["raw"] = tv.raw;
        e["floor_mean"] = tv.floor_mean;
        e["bootstrap_se"] = tv.bootstrap_se;
        e["band_lo"] = tv.band_lo;
        e["band_hi"] = tv.band_hi;
        e["bins"] = tv.bins;
        ests.push_back(e);
    }
    summary["estimates"] = ests;
    ordered_json trend;
    trend["decrease_first_to_last"] = out.decrease;
    trend["band_max"] = out.band_max;
    trend["beyond_band"] = out.trend_beyond_band;
    summary["trend"] = trend;
    summary["scenario_notes"] = scenario.notes;
    write_json_file(cfg.out_dir + "/summary_weak.json", summary);
    write_timings(cfg.out_dir + "/timings.json", "weak", cfg.n_list, seconds,
                  elapsed_seconds(wall_start));
    return out;
}

CrossAlphaResult run_cross_alpha(const ExperimentConfig& cfg) {
    cfg.validate();
    require(cfg.alphas.size() >= 2, "cross-alpha needs at least two alpha values");
    bool has_gaussian = false;
    for (double a : cfg.alphas) has_gaussian = has_gaussian || std::abs(a - 2.0) <= 1e-12;
    require(has_gaussian, "cross-alpha needs alpha = 2 in the list");
    const ScenarioSpec scenario = checked_scenario(cfg);

    CrossAlphaResult out;
    out.alphas = cfg.alphas;
    for (double a : cfg.alphas) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "_alpha%g", a);
        out.per_alpha.push_back(convergence_impl(cfg, a, scenario, tag));
        out.headline_slopes.push_back(out.per_alpha.back().headline.slope);
    }

    double gaussian_slope = 0.0;
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
        if (std::abs(cfg.alphas[i] - 2.0) <= 1e-12) gaussian_slope = out.headline_slopes[i];
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        if (std::abs(cfg.alphas[i] - 2.0) <= 1e-12) continue;
        out.max_slope_diff_vs_gaussian = std::max(
            out.max_slope_diff_vs_gaussian, std::abs(out.headline_slopes[i] - gaussian_slope));
    }

    ordered_json summary;
    summary["command"] = "cross-alpha";
    summary["git_hash"] = MIPS_GIT_HASH;
    summary["config"] = config_echo(cfg, cfg.alphas.front());
    ordered_json slopes = ordered_json::array();
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        ordered_json e;
        e["alpha"] = cfg.alphas[i];
        e["slope"] = out.headline_slopes[i];
        e["theoretical_slope"] = out.per_alpha[i].headline.theoretical_slope;
        slopes.push_back(e);
    }
    summary["slopes"] = slopes;
    summary["max_slope_diff_vs_gaussian"] = out.max_slope_diff_vs_gaussian;
    write_json_file(cfg.out_dir + "/summary_cross_alpha.json", summary);
    return out;
}

bool run_kernel_check(const ExperimentConfig& cfg) {
    cfg.validate();
    const BumpKernel base = make_bump_kernel(1, cfg.bump_radius);
    const Density1d law = Density1d::uniform(cfg.domain_length);

    const int trials = 50;
    double worst = 0.0;
    RngStream pick = derive_stream(cfg.seed, StreamPurpose::generic, 0xCEu);
    for (int trial = 0; trial < trials; ++trial) {
        const long long n = 64 + static_cast<long long>(pick.below(1984));
        ParticleEnsemble e =
            init_particles(law, n, derive_key(cfg.seed, static_cast<std::uint64_t>(trial)), 0);
        const ScaledKernel kernel = scale_kernel(base, n, cfg.theta);
        std::vector<double> fast(static_cast<std::size_t>(n)), slow(static_cast<std::size_t>(n));
        const CellList cl = build_cell_list(e, kernel.support_radius);
        kde_at_particles(cl, kernel, fast.data());
        kde_brute_at_particles(e, kernel, slow.data());
        for (long long i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fast[static_cast<std::size_t>(i)] -
                                             slow[static_cast<std::size_t>(i)]));
    }

    // Kernel mass on a fine grid; the profile is smooth and compactly
    // supported, so the trapezoid sum converges super-algebraically.
    double worst_mass = 0.0;
    for (long long n : {cfg.n_list.front(), cfg.n_list.back()}) {
        const ScaledKernel kernel = scale_kernel(base, n, cfg.theta);
        const int fine = 1 << 16;
        const double h = cfg.domain_length / fine;
        double mass = 0.0;
        for (int i = 0; i < fine; ++i) {
            const double d = torus_delta(i * h, 0.0, cfg.domain_length);
            mass += kernel_value_r2(kernel, d * d);
        }
        worst_mass = std::max(worst_mass, std::abs(mass * h - 1.0));
    }

    const bool pass = worst <= 1e-12 && worst_mass <= 1e-6;
    ensure_out_dir(cfg.out_dir);
    ordered_json report;
    report["command"] = "kernel-check";
    report["git_hash"] = MIPS_GIT_HASH;
    report["trials"] = trials;
    report["max_estimator_diff"] = worst;
    report["max_mass_error"] = worst_mass;
    report["pass"] = pass;
    write_json_file(cfg.out_dir + "/kernel_check.json", report);
    return pass;
}

} // namespace mips
