#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "regionlab/dense.hpp"

namespace regionlab {

/// xoshiro256** generator seeded through splitmix64. Streams are bit-exact
/// across platforms for a given seed. Single owner; do not share between
/// threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via the Box-Muller transform; values are produced in
    /// pairs and the second one is cached.
    double gauss();

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_;
};

/// n independent standard normals.
Vector gauss(Rng& rng, std::size_t n);

}  // namespace regionlab
