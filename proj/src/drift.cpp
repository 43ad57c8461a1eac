#include "mips/drift.hpp"

#include <cmath>
#include <cstdio>

#include "mips/errors.hpp"
#include "mips/torus.hpp"

namespace mips {

void validate_drift_hypothesis(const DriftSpec& drift, double domain_length, double u_max,
                               int n_checks, std::uint64_t seed) {
    require(static_cast<bool>(drift.eval), "drift: eval function missing");
    require(drift.kappa >= 0.0, "drift: kappa must be nonnegative");
    require(drift.beta > 0.0 && drift.beta <= 1.0, "drift: beta must lie in (0,1]");
    require(domain_length > 0.0 && u_max > 0.0 && n_checks > 0,
            "drift: bad spot-check parameters");

    RngStream rng = derive_stream(seed, StreamPurpose::validate);
    // Rounding slack on top of the declared constants.
    const double slack = 1.0 + 1e-9;
    for (int i = 0; i < n_checks; ++i) {
        const double t = rng.uniform01();
        const double x = domain_length * rng.uniform01();
        const double y = domain_length * rng.uniform01();
        const double u = u_max * rng.uniform01();
        const double v = u_max * rng.uniform01();
        const double bx = drift.eval(t, x, u);
        const double by = drift.eval(t, y, v);
        if (!(std::fabs(bx) <= drift.kappa * slack + 1e-15)) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "drift bound violated: |b(%.6g,%.6g,%.6g)| = %.6g > kappa = %.6g", t, x,
                          u, std::fabs(bx), drift.kappa);
            throw validation_error(buf);
        }
        const double dist = std::fabs(torus_delta(x, y, domain_length));
        const double allowed = drift.kappa * (std::pow(dist, drift.beta) + std::fabs(u - v));
        if (!(std::fabs(bx - by) <= allowed * slack + 1e-15)) {
            char buf[200];
            std::snprintf(buf, sizeof(buf),
                          "drift modulus violated: |b(t,x,u)-b(t,y,v)| = %.6g > "
                          "kappa(|x-y|^beta + |u-v|) = %.6g at t=%.6g x=%.6g y=%.6g u=%.6g v=%.6g",
                          std::fabs(bx - by), allowed, t, x, y, u, v);
            throw validation_error(buf);
        }
    }
}

} // namespace mips
