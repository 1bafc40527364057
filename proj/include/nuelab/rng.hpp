#pragma once

#include <cstdint>

namespace nuelab {

// Counter-based generator: output depends only on (seed, stream, counter),
// so parallel batches reproduce exactly regardless of scheduling.
// Mixing is two rounds of the SplitMix64 finalizer.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derive a child stream id; used to give independent substreams to
// samples, replicas and draws without coordination.
inline uint64_t derive_stream(uint64_t stream, uint64_t salt) {
    return mix64(stream ^ mix64(salt + 0x6A09E667F3BCC909ull));
}

class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(mix64(seed ^ mix64(stream + 0xD1B54A32D192ED03ull))) {}

    uint64_t next_u64() {
        uint64_t v = mix64(key_ ^ (counter_ * 0x2545F4914F6CDD1Dull));
        ++counter_;
        return mix64(v + key_);
    }

    // uniform in [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [-1, 1)
    double next_sym() { return 2.0 * next_unit() - 1.0; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

} // namespace nuelab
