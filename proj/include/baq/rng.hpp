#pragma once

#include <cstdint>

namespace baq {

// Counter-style splitmix64 stream. Output is platform independent, so
// fixed (seed, stream) pairs give byte-identical experiment results.
// Parallel consumers must take disjoint stream ids.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        state_ = mix(seed + 0x9E3779B97F4A7C15ULL);
        state_ = mix(state_ ^ mix(stream + 0xBF58476D1CE4E5B9ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1, so the
    // result is always a valid quantile argument.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace baq
