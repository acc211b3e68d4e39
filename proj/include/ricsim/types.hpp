#ifndef RICSIM_TYPES_HPP
#define RICSIM_TYPES_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace ricsim {

using Tick = std::int64_t;
using CellId = std::string;
using UeId = std::string;
using XappId = std::string;

// Simulated tick length; the near-RT control loop lower bound.
inline constexpr double kTickMs = 10.0;

// FNV-1a, used for config hashes and the token MAC abstraction.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Deterministic RNG with a fully specified algorithm (splitmix64 core),
// so streams are reproducible independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent substream, e.g. Rng(seed).fork("mobility").
    Rng fork(std::string_view label) const {
        return Rng(fnv1a64(label, state_ ^ 0x9e3779b97f4a7c15ull));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace ricsim

#endif
