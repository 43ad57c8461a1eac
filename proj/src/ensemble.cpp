#include "mips/ensemble.hpp"

#include "mips/errors.hpp"

namespace mips {

ParticleEnsemble ParticleEnsemble::zeros(int dim, long long count, double length) {
    require(dim >= 1, "ParticleEnsemble: dim must be >= 1");
    require(count >= 1, "ParticleEnsemble: count must be >= 1");
    require(length > 0.0, "ParticleEnsemble: length must be positive");
    ParticleEnsemble e;
    e.dim = dim;
    e.count = count;
    e.length = length;
    e.pos.assign(static_cast<std::size_t>(count) * dim, 0.0);
    return e;
}

ParticleEnsemble init_particles(const Density1d& law, long long count, std::uint64_t seed,
                                std::uint64_t rep) {
    ParticleEnsemble e = ParticleEnsemble::zeros(1, count, law.length);
    for (long long i = 0; i < count; ++i) {
        RngStream s = derive_stream(seed, StreamPurpose::init, rep, static_cast<std::uint64_t>(i));
        e.pos[static_cast<std::size_t>(i)] = law.sample(s);
    }
    return e;
}

} // namespace mips
