#pragma once

#include <cstdint>
#include <vector>

#include "mips/density1d.hpp"
#include "mips/torus.hpp"

namespace mips {

// Particle positions on the torus [0, L)^dim, flattened row-major: particle i
// occupies pos[i*dim .. (i+1)*dim).  Order is the labeling order; estimators
// that need a spatial order build their own sorted copy.
struct ParticleEnsemble {
    int dim = 1;
    long long count = 0;
    double length = 0.0;
    double time = 0.0;
    std::vector<double> pos;

    static ParticleEnsemble zeros(int dim, long long count, double length);

    double* particle(long long i) { return pos.data() + i * dim; }
    const double* particle(long long i) const { return pos.data() + i * dim; }
};

// Initial positions drawn from the law.  Particle i draws from its own
// stream keyed by (seed, init, rep, i), so ensembles of different sizes share
// the draws for the particles they have in common.
ParticleEnsemble init_particles(const Density1d& law, long long count, std::uint64_t seed,
                                std::uint64_t rep);

} // namespace mips
