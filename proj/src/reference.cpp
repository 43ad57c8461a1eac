#include "mips/reference.hpp"

#include <vector>

#include "mips/errors.hpp"

namespace mips {

void kde_brute_at_points(const ParticleEnsemble& ensemble, const ScaledKernel& kernel,
                         const double* queries, std::size_t n_queries, double* out) {
    require(kernel.n_particles == ensemble.count,
            "kde_brute_at_points: kernel scaled for a different particle count");
    const long long n = ensemble.count;
    const int dim = ensemble.dim;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> r2(static_cast<std::size_t>(n));
    for (std::size_t q = 0; q < n_queries; ++q) {
        const double* x = queries + q * static_cast<std::size_t>(dim);
        for (long long j = 0; j < n; ++j)
            r2[static_cast<std::size_t>(j)] = torus_dist2(x, ensemble.particle(j), dim,
                                                          ensemble.length);
        out[q] = inv_n * bump_batch_sum(kernel, r2.data(), r2.size());
    }
}

void kde_brute_at_particles(const ParticleEnsemble& ensemble, const ScaledKernel& kernel,
                            double* out) {
    kde_brute_at_points(ensemble, kernel, ensemble.pos.data(),
                        static_cast<std::size_t>(ensemble.count), out);
}

} // namespace mips
