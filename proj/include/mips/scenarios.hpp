#pragma once

#include <string>
#include <vector>

#include "mips/density1d.hpp"
#include "mips/drift.hpp"

namespace mips {

// A named experiment setting: drift, initial law, and the regularity
// metadata the rate predictions and preconditions read.
struct ScenarioSpec {
    std::string name;
    DriftSpec drift;
    Density1d rho0 = Density1d::uniform(1.0);
    double rho0_holder = 1.0;  // Hoelder index of rho0, 1.0 for smooth laws
    double q = 0.0;            // integrability index of rho0 (inf for bounded data)
    std::string notes;
};

// Registered names: fractional_burgers, holder_drift, zero_drift.
ScenarioSpec make_scenario(const std::string& name, double domain_length);

std::vector<std::string> scenario_names();

} // namespace mips
