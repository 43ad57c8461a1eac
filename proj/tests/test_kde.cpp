#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mips/cell_kde.hpp"
#include "mips/errors.hpp"
#include "mips/mollifier.hpp"
#include "mips/reference.hpp"
#include "mips/rng.hpp"
#include "mips/torus.hpp"
#include "support/oracles.hpp"

namespace {

mips::ParticleEnsemble ensemble_at(const std::vector<double>& positions, double length) {
    mips::ParticleEnsemble e =
        mips::ParticleEnsemble::zeros(1, static_cast<long long>(positions.size()), length);
    e.pos = positions;
    return e;
}

mips::ParticleEnsemble random_ensemble(long long n, double length, std::uint64_t seed) {
    mips::ParticleEnsemble e = mips::ParticleEnsemble::zeros(1, n, length);
    mips::RngStream rng(seed);
    for (long long i = 0; i < n; ++i) e.pos[static_cast<std::size_t>(i)] = rng.uniform(0.0, length);
    return e;
}

} // namespace

TEST_CASE("single particle reproduces one kernel evaluation") {
    const double L = 10.0;
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, 1, 0.25);
    const mips::ParticleEnsemble e = ensemble_at({3.0}, L);
    const mips::CellList cl = mips::build_cell_list(e, k.support_radius);
    for (double q : {3.0, 3.1, 2.8, 3.49, 9.9}) {
        double got = -1.0;
        mips::kde_at_points(cl, k, &q, 1, &got);
        const double d = mips::torus_delta(q, 3.0, L);
        CHECK(got == mips::kernel_value_r2(k, d * d));
    }
}

TEST_CASE("two symmetric particles give a symmetric field") {
    const double L = 10.0;
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, 2, 0.25);
    const double r = k.support_radius;
    const mips::ParticleEnsemble e = ensemble_at({5.0 - 0.25 * r, 5.0 + 0.25 * r}, L);
    const mips::CellList cl = mips::build_cell_list(e, r);

    double mid = 0.0;
    const double q_mid = 5.0;
    mips::kde_at_points(cl, k, &q_mid, 1, &mid);
    CHECK(mid == doctest::Approx(mips::kernel_value_r2(k, 0.0625 * r * r)).epsilon(1e-14));

    for (double delta : {0.1 * r, 0.3 * r, 0.6 * r}) {
        const double ql = 5.0 - delta, qr = 5.0 + delta;
        double vl = 0.0, vr = 0.0;
        mips::kde_at_points(cl, k, &ql, 1, &vl);
        mips::kde_at_points(cl, k, &qr, 1, &vr);
        CHECK(vl == doctest::Approx(vr).epsilon(1e-14));
    }
}

TEST_CASE("cell list agrees with the all-pairs reference") {
    const double L = 20.0;
    const long long n = 512;
    const mips::ParticleEnsemble e = random_ensemble(n, L, 777);
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, n, 0.25);
    const mips::CellList cl = mips::build_cell_list(e, k.support_radius);

    mips::RngStream rng(888);
    std::vector<double> queries(100);
    for (double& q : queries) q = rng.uniform(0.0, L);
    std::vector<double> fast(queries.size()), slow(queries.size());
    mips::kde_at_points(cl, k, queries.data(), queries.size(), fast.data());
    mips::kde_brute_at_points(e, k, queries.data(), queries.size(), slow.data());
    for (std::size_t i = 0; i < queries.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) <= 1e-13);

    std::vector<double> at_fast(static_cast<std::size_t>(n)), at_slow(static_cast<std::size_t>(n));
    mips::kde_at_particles(cl, k, at_fast.data());
    mips::kde_brute_at_particles(e, k, at_slow.data());
    for (long long i = 0; i < n; ++i)
        CHECK(std::abs(at_fast[static_cast<std::size_t>(i)] -
                       at_slow[static_cast<std::size_t>(i)]) <= 1e-13);
}

TEST_CASE("relabeling the particles does not change a single bit") {
    const double L = 20.0;
    const long long n = 256;
    const mips::ParticleEnsemble e = random_ensemble(n, L, 4242);
    mips::ParticleEnsemble shuffled = e;
    // deterministic shuffle of the labels
    mips::RngStream rng(99);
    for (long long i = n - 1; i > 0; --i) {
        const long long j = static_cast<long long>(rng.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(shuffled.pos[static_cast<std::size_t>(i)],
                  shuffled.pos[static_cast<std::size_t>(j)]);
    }
    REQUIRE(shuffled.pos != e.pos);

    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, n, 0.25);
    const mips::CellList cl_a = mips::build_cell_list(e, k.support_radius);
    const mips::CellList cl_b = mips::build_cell_list(shuffled, k.support_radius);

    std::vector<double> queries;
    for (int i = 0; i < 64; ++i) queries.push_back(L * (i + 0.37) / 64.0);
    std::vector<double> va(queries.size()), vb(queries.size());
    mips::kde_at_points(cl_a, k, queries.data(), queries.size(), va.data());
    mips::kde_at_points(cl_b, k, queries.data(), queries.size(), vb.data());
    CHECK(va == vb);

    // per-particle values follow the labels
    std::vector<double> ua(static_cast<std::size_t>(n)), ub(static_cast<std::size_t>(n));
    mips::kde_at_particles(cl_a, k, ua.data());
    mips::kde_at_particles(cl_b, k, ub.data());
    std::sort(ua.begin(), ua.end());
    std::sort(ub.begin(), ub.end());
    CHECK(ua == ub);
}

TEST_CASE("particles beyond the support contribute exactly zero") {
    const double L = 20.0;
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, 3, 0.25);
    const double r = k.support_radius;
    const mips::ParticleEnsemble e = ensemble_at({2.0, 2.0 + 0.5 * r, 10.0}, L);
    const mips::CellList cl = mips::build_cell_list(e, r);

    // query farther than the support from every particle
    double far = 0.0;
    const double q_far = 6.0;
    mips::kde_at_points(cl, k, &q_far, 1, &far);
    CHECK(far == 0.0);

    // near 2.0 the remote particle at 10.0 is invisible: the value equals the
    // two-term hand sum
    const double q = 2.0 + 0.2 * r;
    double got = 0.0;
    mips::kde_at_points(cl, k, &q, 1, &got);
    const double d0 = q - 2.0, d1 = q - (2.0 + 0.5 * r);
    const double hand =
        (mips::kernel_value_r2(k, d0 * d0) + mips::kernel_value_r2(k, d1 * d1)) / 3.0;
    CHECK(got == doctest::Approx(hand).epsilon(1e-15));
}

TEST_CASE("the mollified empirical density has unit mass") {
    const double L = 20.0;
    const long long n = 64;
    const mips::ParticleEnsemble e = random_ensemble(n, L, 31415);
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel k = mips::scale_kernel(base, n, 0.25);
    const mips::CellList cl = mips::build_cell_list(e, k.support_radius);

    const int g = 1 << 14;
    std::vector<double> nodes(static_cast<std::size_t>(g)), vals(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) nodes[static_cast<std::size_t>(i)] = L * i / g;
    mips::kde_at_points(cl, k, nodes.data(), nodes.size(), vals.data());
    const double mass = std::accumulate(vals.begin(), vals.end(), 0.0) * (L / g);
    CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("kernel scaled for the wrong particle count is rejected") {
    const double L = 10.0;
    const mips::ParticleEnsemble e = random_ensemble(32, L, 5);
    const mips::BumpKernel base = mips::make_bump_kernel(1, 0.5);
    const mips::ScaledKernel wrong = mips::scale_kernel(base, 64, 0.25);
    const mips::CellList cl =
        mips::build_cell_list(e, mips::scale_kernel(base, 32, 0.25).support_radius);
    double q = 1.0, out = 0.0;
    CHECK_THROWS_AS(mips::kde_at_points(cl, wrong, &q, 1, &out), mips::validation_error);
    std::vector<double> u(32);
    CHECK_THROWS_AS(mips::kde_at_particles(cl, wrong, u.data()), mips::validation_error);
    CHECK_THROWS_AS(mips::build_cell_list(e, 0.0), mips::validation_error);
}

TEST_CASE("wide kernels fall back to the all-pairs path") {
    // support radius wider than a third of the domain leaves fewer than three
    // cells, where the windowed walk would double count wrapped images
    const double L = 3.0;
    const long long n = 40;
    const mips::ParticleEnsemble e = random_ensemble(n, L, 606);
    const mips::BumpKernel base = mips::make_bump_kernel(1, 1.2);
    const mips::ScaledKernel k = mips::scale_kernel(base, n, 0.01);
    const mips::CellList cl = mips::build_cell_list(e, k.support_radius);
    REQUIRE(cl.cells_per_axis < 3);

    std::vector<double> queries;
    for (int i = 0; i < 50; ++i) queries.push_back(L * (i + 0.5) / 50.0);
    std::vector<double> fast(queries.size()), slow(queries.size());
    mips::kde_at_points(cl, k, queries.data(), queries.size(), fast.data());
    mips::kde_brute_at_points(e, k, queries.data(), queries.size(), slow.data());
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(std::abs(fast[i] - slow[i]) <= 1e-13);
}
