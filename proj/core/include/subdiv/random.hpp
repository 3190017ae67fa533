#pragma once

#include <cstdint>

#include <subdiv/geometry.hpp>

namespace subdiv {

/// Deterministic counter-style random stream keyed by (seed, stream_index).
///
/// The output sequence is a pure function of the key pair, so replicas can
/// run on any thread schedule and still reproduce byte-identical results as
/// long as each replica owns stream_index = replica id. Internally this is
/// splitmix64 with the starting state derived from both key words.
class RandomSource {
public:
    RandomSource() : RandomSource(kDefaultSeed, 0) {}

    RandomSource(std::uint64_t seed, std::uint64_t stream_index)
        : seed_(seed), stream_(stream_index) {
        std::uint64_t k = mix(seed + kGamma);
        state_ = mix(k ^ mix(stream_index * 0xD1B54A32D192ED03ULL + kGamma));
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Fair bit.
    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    /// Uniform index in [0, n).
    int next_index(int n) {
        int k = static_cast<int>(next_uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

    UniformTriple next_triple() {
        double xa = next_uniform();
        double xb = next_uniform();
        double xc = next_uniform();
        return {xa, xb, xc};
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    static constexpr std::uint64_t kDefaultSeed = 1;

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

}  // namespace subdiv
