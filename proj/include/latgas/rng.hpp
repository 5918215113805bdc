#pragma once

// Counter-based random numbers keyed by space-time coordinates.
//
// Every random decision in a noisy run is a pure function of
// (seed, a, b, i, t, draw). Cells can therefore be evaluated in any
// order -- or in parallel -- and still produce bit-identical output,
// and a single cell's randomness can be replayed without re-running
// the trajectory.

#include <cstdint>

namespace latgas {

namespace detail {

// splitmix64 finalizer: a bijective avalanche mix on 64 bits.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

class CellRng {
 public:
  explicit CellRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Key for one space-time cell; hash-chains the coordinates through
  // the mixer so nearby cells land in unrelated parts of the stream.
  std::uint64_t cell_key(int a, int b, int i, int t) const {
    std::uint64_t h = detail::mix64(seed_ ^ 0x61636c6c746b6579ull);
    h = detail::mix64(h ^ static_cast<std::uint32_t>(a));
    h = detail::mix64(h ^ static_cast<std::uint32_t>(b));
    h = detail::mix64(h ^ static_cast<std::uint32_t>(i));
    h = detail::mix64(h ^ static_cast<std::uint32_t>(t));
    return h;
  }

  // draw indexes independent values within one cell (flip decision,
  // replacement symbol, ...).
  static std::uint64_t bits(std::uint64_t cell_key, std::uint32_t draw) {
    return detail::mix64(cell_key ^ (0x9e3779b97f4a7c15ull * (draw + 1)));
  }

  // Uniform double in [0,1) with 53 random bits.
  static double uniform01(std::uint64_t cell_key, std::uint32_t draw) {
    return static_cast<double>(bits(cell_key, draw) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace latgas
