#include "mips/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "mips/errors.hpp"

namespace mips {
namespace {

constexpr char kDensityMagic[8] = {'M', 'I', 'P', 'S', 'R', 'H', 'O', '1'};

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    require(out.good(), "cannot open for writing: " + path);
    return out;
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    require(in.good(), "density file truncated");
}

} // namespace

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void sort_error_records(ErrorTable& table) {
    std::stable_sort(table.records.begin(), table.records.end(),
                     [](const ErrorRecord& a, const ErrorRecord& b) {
                         if (a.kind != b.kind) return a.kind < b.kind;
                         if (a.n_particles != b.n_particles) return a.n_particles < b.n_particles;
                         if (a.rep != b.rep) return a.rep < b.rep;
                         if (a.t != b.t) return a.t < b.t;
                         return a.scenario < b.scenario;
                     });
}

void write_error_csv(const std::string& path, const ErrorTable& table) {
    ErrorTable sorted = table;
    sort_error_records(sorted);
    std::ofstream out = open_out(path);
    out << "scenario,alpha,theta,beta,N,rep,t,kind,value,seed\n";
    for (const ErrorRecord& r : sorted.records) {
        out << r.scenario << ',' << format_g17(r.alpha) << ',' << format_g17(r.theta) << ','
            << format_g17(r.beta) << ',' << r.n_particles << ',' << r.rep << ','
            << format_g17(r.t) << ',' << r.kind << ',' << format_g17(r.value) << ',' << r.seed
            << '\n';
    }
    require(out.good(), "write failed: " + path);
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
    require(out.good(), "write failed: " + path);
}

void write_particle_csv(const std::string& path, const ParticleEnsemble& ensemble,
                        const ParticleCsvMeta& meta) {
    std::ofstream out = open_out(path);
    out << "# t=" << format_g17(meta.t) << " N=" << meta.n << " d=" << meta.dim
        << " L=" << format_g17(meta.length) << " alpha=" << format_g17(meta.alpha)
        << " theta=" << format_g17(meta.theta) << " seed=" << meta.seed << '\n';
    out << "index";
    for (int a = 0; a < ensemble.dim; ++a) out << ",x" << a;
    out << '\n';
    for (long long i = 0; i < ensemble.count; ++i) {
        out << i;
        const double* p = ensemble.particle(i);
        for (int a = 0; a < ensemble.dim; ++a) out << ',' << format_g17(p[a]);
        out << '\n';
    }
    require(out.good(), "write failed: " + path);
}

void write_density_csv(const std::string& path, const DensityPath& path_data,
                       const DensityMeta& meta) {
    std::ofstream out = open_out(path);
    out << "# alpha=" << format_g17(meta.alpha) << " L=" << format_g17(meta.length)
        << " n=" << meta.grid_n << " dt=" << format_g17(meta.dt)
        << " scenario=" << meta.scenario_id << '\n';
    out << "t,x,rho\n";
    for (std::size_t f = 0; f < path_data.fields.size(); ++f) {
        const GridField& g = path_data.fields[f];
        for (int i = 0; i < g.n; ++i)
            out << format_g17(path_data.times[f]) << ',' << format_g17(g.node(i)) << ','
                << format_g17(g.values[static_cast<std::size_t>(i)]) << '\n';
    }
    require(out.good(), "write failed: " + path);
}

void write_density_binary(const std::string& path, const DensityPath& path_data,
                          const DensityMeta& meta) {
    require(!path_data.fields.empty(), "write_density_binary: empty path");
    require(path_data.fields.size() == path_data.times.size(),
            "write_density_binary: times/fields mismatch");
    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    out.write(kDensityMagic, sizeof(kDensityMagic));
    write_raw(out, meta.alpha);
    write_raw(out, meta.length);
    write_raw(out, static_cast<std::int32_t>(meta.grid_n));
    write_raw(out, meta.dt);
    write_raw(out, static_cast<std::int32_t>(meta.scenario_id));
    write_raw(out, static_cast<std::int64_t>(path_data.fields.size()));
    for (double t : path_data.times) write_raw(out, t);
    for (const GridField& g : path_data.fields) {
        require(g.dim == 1 && g.n == meta.grid_n, "write_density_binary: frame shape mismatch");
        out.write(reinterpret_cast<const char*>(g.values.data()),
                  static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    }
    require(out.good(), "write failed: " + path);
}

DensityPath read_density_binary(const std::string& path, DensityMeta& meta_out) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    require(in.good(), "cannot open for reading: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    require(in.good() && std::memcmp(magic, kDensityMagic, sizeof(magic)) == 0,
            "not a density file: " + path);
    std::int32_t n = 0, scenario_id = 0;
    std::int64_t frames = 0;
    read_raw(in, meta_out.alpha);
    read_raw(in, meta_out.length);
    read_raw(in, n);
    read_raw(in, meta_out.dt);
    read_raw(in, scenario_id);
    read_raw(in, frames);
    require(n > 0 && frames > 0 && meta_out.length > 0.0, "corrupt density header");
    meta_out.grid_n = n;
    meta_out.scenario_id = scenario_id;

    DensityPath p;
    p.dt = meta_out.dt;
    p.times.resize(static_cast<std::size_t>(frames));
    for (double& t : p.times) read_raw(in, t);
    p.fields.reserve(static_cast<std::size_t>(frames));
    for (std::int64_t f = 0; f < frames; ++f) {
        GridField g = GridField::zeros(1, n, meta_out.length);
        in.read(reinterpret_cast<char*>(g.values.data()),
                static_cast<std::streamsize>(g.values.size() * sizeof(double)));
        require(in.good(), "density file truncated");
        p.fields.push_back(std::move(g));
    }
    return p;
}

} // namespace mips
