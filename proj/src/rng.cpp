#include "sphgrf/rng.hpp"

#include <array>

namespace sgrf {

std::mt19937_64 make_engine(const RngSpec& rng, std::uint64_t replicate, std::uint64_t key) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  const std::array<std::uint32_t, 8> words = {lo(rng.seed),   hi(rng.seed), lo(rng.stream), hi(rng.stream),
                                              lo(replicate), hi(replicate), lo(key),        hi(key)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace sgrf
