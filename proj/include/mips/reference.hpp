#pragma once

#include <cstddef>

#include "mips/bump_batch.hpp"
#include "mips/ensemble.hpp"

namespace mips {

// Serial all-pairs estimators, O(N * queries).  They share the batch kernel
// evaluator with the cell-list path, so any disagreement points at the
// neighbor search rather than at the arithmetic.
void kde_brute_at_points(const ParticleEnsemble& ensemble, const ScaledKernel& kernel,
                         const double* queries, std::size_t n_queries, double* out);

void kde_brute_at_particles(const ParticleEnsemble& ensemble, const ScaledKernel& kernel,
                            double* out);

} // namespace mips
