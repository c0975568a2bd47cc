#pragma once

#include <cstdint>
#include <string_view>

namespace pxc {

// splitmix64; the de-facto standard seed expander.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent seed substream for (base, a, b); schedule-independent results
// depend on this being a pure function.
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0) {
    return mix64(mix64(mix64(base) ^ a) ^ b);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// xoshiro-free minimal generator: splitmix64 stream. Distribution helpers are
// written out so sampled sequences do not depend on the standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi]
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi], inclusive
    long uniform_int(long lo, long hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        // multiply-shift reduction; bias is negligible for span << 2^64
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * span;
        return lo + static_cast<long>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    uint64_t state_;
};

}  // namespace pxc
