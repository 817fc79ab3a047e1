#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "risopt/common.hpp"

namespace risopt {

/// splitmix64 step; used to derive independent sub-streams from a base seed.
/// The constants are the reference ones from Vigna's splitmix64.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream with a fixed cross-platform bit layout.
///
/// The generator is xoshiro256** seeded via splitmix64, uniform doubles come
/// from the top 53 bits, and complex normals use Box-Muller. None of the
/// draw paths depend on libstdc++ distribution internals, so the same seed
/// gives the same values on any conforming compiler.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s = mix_seed(s, 0);
            word = s;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform_pos() { return 1.0 - uniform(); }

    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    cxd normal_c() {
        const double r = std::sqrt(-std::log(uniform_pos()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4] = {};
};

}  // namespace risopt
