#pragma once

#include <cstdint>
#include <functional>

#include "mips/rng.hpp"

namespace mips {

// Drift b(t, x, u): time, position (one-dimensional scenarios), estimated
// density value u >= 0.  Declared constants: |b| <= kappa and
// |b(t,x,u) - b(t,y,v)| <= kappa * (|x-y|^beta + |u-v|); both are enforced by
// randomized spot checks before a drift is ever stepped.
struct DriftSpec {
    std::function<double(double t, double x, double u)> eval;
    double kappa = 0.0;
    double beta = 1.0;   // spatial Hoelder exponent in (0,1]
    double lip_u = 0.0;  // Lipschitz constant in u (<= kappa)
};

// Randomized verification of the declared bound and modulus over
// t in [0,1], x on a circle of circumference domain_length, u in [0, u_max].
// Throws validation_error on the first violated triple.
void validate_drift_hypothesis(const DriftSpec& drift, double domain_length, double u_max,
                               int n_checks, std::uint64_t seed);

} // namespace mips
