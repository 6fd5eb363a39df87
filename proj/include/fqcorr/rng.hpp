#pragma once

#include <cstdint>

namespace fqcorr {

// Deterministic 64-bit generator (splitmix64). A fixed seed fully determines
// every output, independent of platform. derive() produces decorrelated
// streams for worker chunks so parallel runs reproduce bit-identically.
class RandomSource {
  public:
    explicit RandomSource(uint64_t seed) : seed_(seed), state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound), bound >= 1. Rejection sampling keeps the
    // distribution exactly uniform.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    uint64_t seed() const { return seed_; }

    // Independent stream keyed by (original seed, stream id).
    RandomSource derive(uint64_t stream) const {
        uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return RandomSource(z ^ (z >> 31));
    }

  private:
    uint64_t seed_;
    uint64_t state_;
};

}  // namespace fqcorr
