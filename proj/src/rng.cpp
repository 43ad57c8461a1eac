#include "mips/rng.hpp"

namespace mips {

RngStream derive_stream(std::uint64_t seed, StreamPurpose purpose,
                        std::uint64_t k1, std::uint64_t k2) {
    std::uint64_t s = mix64(seed + kSplitMixGamma * static_cast<std::uint64_t>(purpose));
    s = mix64(s + kSplitMixGamma * (k1 + 1));
    s = mix64(s + kSplitMixGamma * (k2 + 1));
    return RngStream(s);
}

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2) {
    std::uint64_t s = mix64(seed + kSplitMixGamma * (k1 + 1));
    return mix64(s + kSplitMixGamma * (k2 + 1));
}

} // namespace mips
