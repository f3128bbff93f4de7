#pragma once

#include <cstdint>
#include <random>

namespace sgrf {

/// Seed plus stream id. Engines are derived per (replicate, key) so that the
/// numbers a replicate sees do not depend on thread scheduling.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Engine for one (replicate, key) cell of the stream. `key` is the
/// spherical-harmonic degree for the KL samplers and 0 or a pair index
/// elsewhere.
std::mt19937_64 make_engine(const RngSpec& rng, std::uint64_t replicate, std::uint64_t key);

}  // namespace sgrf
