#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace queryclust {

// Counter-based pseudo-randomness. Every draw is a pure function of
// (seed, counter words), so pair-indexed draws are order-independent and
// runs reproduce bit-for-bit on any platform.
namespace rng {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix(uint64_t seed, uint64_t a) {
    return splitmix64(splitmix64(seed) ^ a);
}

inline uint64_t mix(uint64_t seed, uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

// Uniform double in [0, 1) from 53 high bits.
inline double to_unit(uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double pair_unit(uint64_t seed, int u, int v) {
    if (u > v) { int t = u; u = v; v = t; }
    return to_unit(mix(seed, static_cast<uint64_t>(u), static_cast<uint64_t>(v)));
}

// Small sequential generator for shuffles and sampling. Deterministic and
// self-contained (std::shuffle is implementation-defined).
class Sequence {
public:
    explicit Sequence(uint64_t seed) : state_(splitmix64(seed ^ 0x5bf03635ea7f3a1cULL)) {}

    uint64_t next() {
        state_ = splitmix64(state_);
        return state_;
    }

    double unit() { return to_unit(next()); }

    // Uniform integer in [0, bound) by rejection.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    uint64_t state_;
};

}  // namespace rng
}  // namespace queryclust
