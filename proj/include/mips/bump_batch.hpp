#pragma once

#include <cstddef>

#include "mips/mollifier.hpp"

namespace mips {

// Hot inner loop of every density estimate: sum of kernel values over a batch
// of squared distances.  Lives in its own translation unit built with
// -ffast-math so the exp calls vectorize; both the cell-list and the
// brute-force estimators funnel through it, which keeps their per-batch
// arithmetic identical.
double bump_batch_sum(const ScaledKernel& k, const double* r2, std::size_t count);

} // namespace mips
