#pragma once

#include <cstdint>
#include <vector>

#include "mips/cell_kde.hpp"
#include "mips/density1d.hpp"
#include "mips/drift.hpp"
#include "mips/ensemble.hpp"
#include "mips/fpe.hpp"
#include "mips/stable_noise.hpp"

namespace mips {

// Everything one replication of the interacting system needs.  Noise and
// initial draws come from per-particle streams keyed by
// (seed, purpose, rep, label): labels default to the particle index, and the
// stream position within a step is reconstructed by counter jumps, so results
// do not depend on thread scheduling.
struct SimulationPlan {
    StableNoiseConfig noise;  // dim must be 1
    DriftSpec drift;
    ScaledKernel kernel;  // scaled for n_particles
    Density1d rho0 = Density1d::uniform(1.0);
    long long n_particles = 0;
    double dt = 1e-3;
    double t_end = 0.5;
    double domain_length = 0.0;
    std::uint64_t seed = 1;
    std::uint64_t rep = 0;
    bool record_particle1 = false;
    std::vector<double> snapshot_times;      // empty: keep the final state only
    std::vector<std::uint64_t> stream_labels;  // empty: identity labels

    void validate() const;
};

// Per-step increments of the first particle, kept so the limiting dynamics
// can be driven by the very same noise.
struct NoiseTape {
    double dt = 0.0;
    double alpha = 2.0;
    std::vector<double> increments;
};

struct SimulationResult {
    std::vector<ParticleEnsemble> snapshots;
    NoiseTape tape;                     // filled when record_particle1
    std::vector<double> particle1_path;  // positions at every step incl. t=0
};

// One synchronous Euler step from step_index to step_index + 1: density
// estimates for all particles are read from the pre-step snapshot, then every
// position updates as wrap(x + b(t, x, u) dt + dL).  Optional outputs: the
// density estimates actually fed to the drift, and particle 1's increment.
void step_euler(ParticleEnsemble& ensemble, const SimulationPlan& plan, long long step_index,
                double* u_out = nullptr, double* dl1_out = nullptr);

SimulationResult simulate(const SimulationPlan& plan);

// Euler path of the limiting dynamics sharing the tape's increments:
// x <- wrap(x + b(t, x, rho_t(x)) dt + tape[k]), with the density linearly
// interpolated in t and periodic-cubically in x.  Returns positions at every
// step including the start.
std::vector<double> simulate_limit_sde(const DensityPath& rho_path, const DriftSpec& drift,
                                       const NoiseTape& tape, double x0);

// Max over steps of the torus distance between two equally long paths.
double pathwise_error(const std::vector<double>& path_a, const std::vector<double>& path_b,
                      double domain_length);

} // namespace mips
