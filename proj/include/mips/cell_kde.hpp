#pragma once

#include <cstddef>
#include <vector>

#include "mips/bump_batch.hpp"
#include "mips/ensemble.hpp"

namespace mips {

// Spatial index over the ensemble for compact-support kernel sums.  Cell
// width is at least the kernel support radius, so a one-cell neighborhood
// around a query covers every particle that can contribute.  Slots within a
// cell are sorted by position, which makes every downstream sum independent
// of the particle labeling.
struct CellList {
    int dim = 1;
    double length = 0.0;
    int cells_per_axis = 1;
    double cell_width = 0.0;
    std::vector<long long> cell_start;  // prefix offsets into sorted arrays
    std::vector<double> sorted_pos;     // positions grouped by cell
    std::vector<long long> sorted_index;  // original label of each slot
};

CellList build_cell_list(const ParticleEnsemble& ensemble, double support_radius);

// Mollified empirical density (1/N) * sum_j kernel(x - X_j) at each query
// point; parallel over queries.
void kde_at_points(const CellList& cl, const ScaledKernel& kernel, const double* queries,
                   std::size_t n_queries, double* out);

// Same field evaluated at every particle; out is indexed by the original
// particle labels.  Includes the self term, matching the field definition.
void kde_at_particles(const CellList& cl, const ScaledKernel& kernel, double* out);

} // namespace mips
