#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "mips/ensemble.hpp"
#include "mips/fpe.hpp"
#include "mips/metrics.hpp"

namespace mips {

using ordered_json = nlohmann::ordered_json;

// Shortest exact decimal for a double; every float written to disk goes
// through here so outputs are byte-stable across platforms and thread counts.
std::string format_g17(double x);

// Canonical row order (kind, N, rep, t, scenario); writers sort a copy, so
// output bytes never depend on production order.
void sort_error_records(ErrorTable& table);

// Header: scenario,alpha,theta,beta,N,rep,t,kind,value,seed
void write_error_csv(const std::string& path, const ErrorTable& table);

void write_json_file(const std::string& path, const ordered_json& j);

struct ParticleCsvMeta {
    double t = 0.0;
    long long n = 0;
    int dim = 1;
    double length = 0.0;
    double alpha = 2.0;
    double theta = 0.0;
    std::uint64_t seed = 0;
};

// One snapshot per file; metadata in a leading comment line, then index,x rows.
void write_particle_csv(const std::string& path, const ParticleEnsemble& ensemble,
                        const ParticleCsvMeta& meta);

struct DensityMeta {
    double alpha = 2.0;
    double length = 0.0;
    int grid_n = 0;
    double dt = 0.0;
    int scenario_id = 0;
};

// Long format t,x,rho with the metadata comment line.
void write_density_csv(const std::string& path, const DensityPath& path_data,
                       const DensityMeta& meta);

// Packed doubles behind a magic tag and the same metadata; read_density_binary
// inverts write_density_binary exactly.
void write_density_binary(const std::string& path, const DensityPath& path_data,
                          const DensityMeta& meta);
DensityPath read_density_binary(const std::string& path, DensityMeta& meta_out);

} // namespace mips
