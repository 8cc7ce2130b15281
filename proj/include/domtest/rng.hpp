#pragma once

#include <cstdint>
#include <random>

namespace domtest {

/// Independent engine for substream (seed, stream, index). The state is a
/// pure function of the triple, so replicate r draws the same numbers no
/// matter which worker runs it or in what order.
inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index)};
  return std::mt19937_64(seq);
}

}  // namespace domtest
