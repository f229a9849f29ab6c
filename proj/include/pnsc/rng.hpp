#pragma once

#include <cstdint>
#include <random>

namespace pnsc {

using Rng = std::mt19937_64;

// Independent generator for sub-stream `stream` of a run seeded with `seed`.
// Work is split into fixed-size blocks with one stream each, so results do
// not depend on how blocks are scheduled over threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

}  // namespace pnsc
