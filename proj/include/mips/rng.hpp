#pragma once

#include <cmath>
#include <cstdint>

namespace mips {

// Counter-based streams built on the SplitMix64 finalizer: a stream is a
// counter advanced by a fixed odd gamma, output = mix(counter).  Streams for
// different (seed, purpose, k1, k2) keys are derived by chained mixing, so any
// (replication, particle) pair gets its own reproducible sequence no matter
// which thread runs it.

inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream purposes keep independent uses of the same (rep, particle) key apart.
enum class StreamPurpose : std::uint64_t {
    init = 1,       // initial particle positions
    noise = 2,      // driving noise increments
    bootstrap = 3,  // resampling in error aggregation
    validate = 4,   // drift hypothesis spot-checks
    synthetic = 5,  // synthetic reference draws (TV noise floor)
    generic = 6,
};

class RngStream {
public:
    RngStream() : state_(0) {}
    explicit RngStream(std::uint64_t initial_state) : state_(initial_state) {}

    std::uint64_t next_u64() {
        state_ += kSplitMixGamma;
        return mix64(state_);
    }

    /// Uniform strictly inside (0,1); 53-bit resolution, never 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Integer in [0, bound) by rejection-free scaling (bound << 2^53).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound)) % bound;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

    /// Jump ahead as if n draws of next_u64 had been consumed; O(1).
    void skip(std::uint64_t n) { state_ += n * kSplitMixGamma; }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Independent stream keyed by (seed, purpose, k1, k2).
RngStream derive_stream(std::uint64_t seed, StreamPurpose purpose,
                        std::uint64_t k1 = 0, std::uint64_t k2 = 0);

/// 64-bit key for (seed, k1, k2); used for per-replication seed reporting.
std::uint64_t derive_key(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0);

} // namespace mips
