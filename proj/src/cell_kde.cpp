#include "mips/cell_kde.hpp"

#include <algorithm>
#include <cmath>

#include "mips/errors.hpp"

namespace mips {

namespace {

// A window of +/-1 cells only gives correct minimum images when it does not
// wrap onto itself.
constexpr int kMinCellsForWindow = 3;

inline int clamp_cell(double coord, double inv_width, int n_cells) {
    int c = static_cast<int>(coord * inv_width);
    if (c >= n_cells) c = n_cells - 1;
    if (c < 0) c = 0;
    return c;
}

// Gathers squared distances from one query point into buf (d = 1).
inline void gather_r2_1d(const CellList& cl, double x, std::vector<double>& buf) {
    buf.clear();
    const int n_c = cl.cells_per_axis;
    if (n_c < kMinCellsForWindow) {
        for (std::size_t s = 0; s < cl.sorted_pos.size(); ++s) {
            const double d = torus_delta(x, cl.sorted_pos[s], cl.length);
            buf.push_back(d * d);
        }
        return;
    }
    const double inv_w = 1.0 / cl.cell_width;
    const int cq = clamp_cell(x, inv_w, n_c);
    for (int w = -1; w <= 1; ++w) {
        int c = cq + w;
        double shift = 0.0;
        if (c < 0) {
            c += n_c;
            shift = -cl.length;
        } else if (c >= n_c) {
            c -= n_c;
            shift = cl.length;
        }
        const long long lo = cl.cell_start[c];
        const long long hi = cl.cell_start[c + 1];
        for (long long s = lo; s < hi; ++s) {
            const double d = x - (cl.sorted_pos[static_cast<std::size_t>(s)] + shift);
            buf.push_back(d * d);
        }
    }
}

// Same for d = 2 with a 3x3 window of cells.
inline void gather_r2_2d(const CellList& cl, const double* x, std::vector<double>& buf) {
    buf.clear();
    const int n_c = cl.cells_per_axis;
    if (n_c < kMinCellsForWindow) {
        const std::size_t n = cl.sorted_pos.size() / 2;
        for (std::size_t s = 0; s < n; ++s)
            buf.push_back(torus_dist2(x, &cl.sorted_pos[2 * s], 2, cl.length));
        return;
    }
    const double inv_w = 1.0 / cl.cell_width;
    const int cq0 = clamp_cell(x[0], inv_w, n_c);
    const int cq1 = clamp_cell(x[1], inv_w, n_c);
    for (int w0 = -1; w0 <= 1; ++w0) {
        int c0 = cq0 + w0;
        double shift0 = 0.0;
        if (c0 < 0) {
            c0 += n_c;
            shift0 = -cl.length;
        } else if (c0 >= n_c) {
            c0 -= n_c;
            shift0 = cl.length;
        }
        for (int w1 = -1; w1 <= 1; ++w1) {
            int c1 = cq1 + w1;
            double shift1 = 0.0;
            if (c1 < 0) {
                c1 += n_c;
                shift1 = -cl.length;
            } else if (c1 >= n_c) {
                c1 -= n_c;
                shift1 = cl.length;
            }
            const long long cell = static_cast<long long>(c0) * n_c + c1;
            const long long lo = cl.cell_start[static_cast<std::size_t>(cell)];
            const long long hi = cl.cell_start[static_cast<std::size_t>(cell) + 1];
            for (long long s = lo; s < hi; ++s) {
                const double* p = &cl.sorted_pos[2 * static_cast<std::size_t>(s)];
                const double d0 = x[0] - (p[0] + shift0);
                const double d1 = x[1] - (p[1] + shift1);
                buf.push_back(d0 * d0 + d1 * d1);
            }
        }
    }
}

} // namespace

CellList build_cell_list(const ParticleEnsemble& ensemble, double support_radius) {
    require(ensemble.dim == 1 || ensemble.dim == 2, "build_cell_list: dim must be 1 or 2");
    require(support_radius > 0.0, "build_cell_list: support radius must be positive");

    CellList cl;
    cl.dim = ensemble.dim;
    cl.length = ensemble.length;
    int n_c = static_cast<int>(std::floor(ensemble.length / support_radius));
    n_c = std::clamp(n_c, 1, 4096);
    cl.cells_per_axis = n_c;
    cl.cell_width = ensemble.length / n_c;

    const long long n = ensemble.count;
    const int dim = ensemble.dim;
    const double inv_w = 1.0 / cl.cell_width;

    std::vector<long long> order(static_cast<std::size_t>(n));
    std::vector<long long> cell_of(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double* p = ensemble.particle(i);
        long long cell = clamp_cell(p[0], inv_w, n_c);
        if (dim == 2) cell = cell * n_c + clamp_cell(p[1], inv_w, n_c);
        cell_of[static_cast<std::size_t>(i)] = cell;
        order[static_cast<std::size_t>(i)] = i;
    }
    // Sorting by (cell, position) fixes the in-cell order up to exact
    // coincidences, whose kernel terms are interchangeable anyway.
    std::sort(order.begin(), order.end(), [&](long long a, long long b) {
        const long long ca = cell_of[static_cast<std::size_t>(a)];
        const long long cb = cell_of[static_cast<std::size_t>(b)];
        if (ca != cb) return ca < cb;
        const double* pa = ensemble.particle(a);
        const double* pb = ensemble.particle(b);
        for (int k = 0; k < dim; ++k) {
            if (pa[k] != pb[k]) return pa[k] < pb[k];
        }
        return false;
    });

    long long total_cells = n_c;
    if (dim == 2) total_cells *= n_c;
    cl.cell_start.assign(static_cast<std::size_t>(total_cells) + 1, 0);
    for (long long i = 0; i < n; ++i)
        ++cl.cell_start[static_cast<std::size_t>(cell_of[static_cast<std::size_t>(i)]) + 1];
    for (std::size_t c = 1; c < cl.cell_start.size(); ++c) cl.cell_start[c] += cl.cell_start[c - 1];

    cl.sorted_pos.resize(static_cast<std::size_t>(n) * dim);
    cl.sorted_index.resize(static_cast<std::size_t>(n));
    for (long long s = 0; s < n; ++s) {
        const long long i = order[static_cast<std::size_t>(s)];
        cl.sorted_index[static_cast<std::size_t>(s)] = i;
        const double* p = ensemble.particle(i);
        for (int k = 0; k < dim; ++k) cl.sorted_pos[static_cast<std::size_t>(s) * dim + k] = p[k];
    }
    return cl;
}

void kde_at_points(const CellList& cl, const ScaledKernel& kernel, const double* queries,
                   std::size_t n_queries, double* out) {
    require(kernel.n_particles == static_cast<long long>(cl.sorted_index.size()),
            "kde_at_points: kernel scaled for a different particle count");
    require(kernel.dim == cl.dim, "kde_at_points: kernel/ensemble dimension mismatch");
    const double inv_n = 1.0 / static_cast<double>(cl.sorted_index.size());
    const long long nq = static_cast<long long>(n_queries);
#pragma omp parallel if (nq >= 64)
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (long long q = 0; q < nq; ++q) {
            if (cl.dim == 1)
                gather_r2_1d(cl, queries[q], buf);
            else
                gather_r2_2d(cl, queries + 2 * q, buf);
            out[q] = inv_n * bump_batch_sum(kernel, buf.data(), buf.size());
        }
    }
}

void kde_at_particles(const CellList& cl, const ScaledKernel& kernel, double* out) {
    require(kernel.n_particles == static_cast<long long>(cl.sorted_index.size()),
            "kde_at_particles: kernel scaled for a different particle count");
    require(kernel.dim == cl.dim, "kde_at_particles: kernel/ensemble dimension mismatch");
    const long long n = static_cast<long long>(cl.sorted_index.size());
    const double inv_n = 1.0 / static_cast<double>(n);
#pragma omp parallel if (n >= 64)
    {
        std::vector<double> buf;
#pragma omp for schedule(static)
        for (long long s = 0; s < n; ++s) {
            const double* x = &cl.sorted_pos[static_cast<std::size_t>(s) * cl.dim];
            if (cl.dim == 1)
                gather_r2_1d(cl, x[0], buf);
            else
                gather_r2_2d(cl, x, buf);
            out[cl.sorted_index[static_cast<std::size_t>(s)]] =
                inv_n * bump_batch_sum(kernel, buf.data(), buf.size());
        }
    }
}

} // namespace mips
