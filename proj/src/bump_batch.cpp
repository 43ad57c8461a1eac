// Built with -ffast-math (see CMakeLists) so the exp below maps to the
// vectorized math library.  Keep this file free of any arithmetic whose
// rounding contract matters elsewhere.
#include "mips/bump_batch.hpp"

#include <cmath>

namespace mips {

double bump_batch_sum(const ScaledKernel& k, const double* r2, std::size_t count) {
    const double inv_r2 = k.inv_support_r2;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < count; ++i) {
        const double t = 1.0 - r2[i] * inv_r2;
        const double safe = t > 0.0 ? t : 1.0;
        acc += t > 0.0 ? std::exp(-1.0 / safe) : 0.0;
    }
    return acc * k.amplitude;
}

} // namespace mips
