#include "mips/scenarios.hpp"

#include <cmath>
#include <limits>

#include "mips/errors.hpp"

namespace mips {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

ScenarioSpec make_scenario(const std::string& name, double domain_length) {
    require(domain_length > 0.0, "make_scenario: domain length must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    ScenarioSpec s;
    s.name = name;
    s.q = inf;

    if (name == "fractional_burgers") {
        // Burgers-type transport b(u) = u, truncated at u_cap so the bound
        // constant is explicit; the cap never binds for the shipped initial
        // laws (density stays far below 1).
        const double u_cap = 1.0;
        s.drift.eval = [u_cap](double, double, double u) { return std::min(u, u_cap); };
        s.drift.kappa = u_cap;
        s.drift.beta = 0.999;  // x-independent drift: any spatial exponent below 1 holds
        s.drift.lip_u = 1.0;
        s.rho0 = Density1d::wrapped_gaussian(domain_length, 0.5 * domain_length, 1.0);
        s.rho0_holder = 1.0;
        s.notes = "x-independent Lipschitz-in-u drift; smooth initial law; "
                  "transport form, so the sup norm is non-increasing";
    } else if (name == "holder_drift") {
        // Spatially rough drift: |sin(2 pi x/L)|^beta is beta-Hoelder with
        // constant (2 pi/L)^beta, plus a Lipschitz tanh(u) term.
        const double kappa0 = 0.4;
        const double beta = 0.6;
        const double L = domain_length;
        s.drift.eval = [kappa0, beta, L](double, double x, double u) {
            return kappa0 *
                   (std::pow(std::fabs(std::sin(kTwoPi * x / L)), beta) + std::tanh(u));
        };
        s.drift.kappa = 2.0 * kappa0;
        s.drift.beta = beta;
        s.drift.lip_u = kappa0;
        s.rho0 = Density1d::holder_profile(domain_length, 0.2, beta);
        s.rho0_holder = beta;
        s.notes = "beta-Hoelder drift in x and beta-Hoelder initial law; "
                  "exercises the rough branch of the rate prediction";
    } else if (name == "zero_drift") {
        s.drift.eval = [](double, double, double) { return 0.0; };
        s.drift.kappa = 0.0;
        s.drift.beta = 0.999;
        s.drift.lip_u = 0.0;
        s.rho0 = Density1d::wrapped_gaussian(domain_length, 0.5 * domain_length, 1.0);
        s.rho0_holder = 1.0;
        s.notes = "control: particles are independent stable processes, so the "
                  "single-particle law equals the solved density exactly";
    } else {
        throw validation_error("unknown scenario: " + name);
    }
    return s;
}

std::vector<std::string> scenario_names() {
    return {"fractional_burgers", "holder_drift", "zero_drift"};
}

} // namespace mips
