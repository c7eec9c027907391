#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "securezone/bytes.hpp"

namespace securezone {

/// Seeded deterministic generator. All randomized operations in the library
/// take one of these explicitly; nothing reads ambient entropy or clocks, so
/// a fixed seed reproduces byte-identical artifacts. mt19937_64 raw output is
/// fully specified by the standard, which keeps streams portable across
/// toolchains (std::uniform_int_distribution is not, so we avoid it).
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform value in [0, bound) by rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw Error("uniform_below: zero bound");
    // 2^64 mod bound; accept draws below the largest multiple of bound.
    const std::uint64_t m = (UINT64_MAX % bound + 1) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (m == 0 || r <= UINT64_MAX - m) return r % bound;
    }
  }

  void fill(std::span<Byte> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t v = next_u64();
      for (int shift = 56; shift >= 0 && i < out.size(); shift -= 8) {
        out[i++] = static_cast<Byte>(v >> shift);
      }
    }
  }

  template <std::size_t N>
  std::array<Byte, N> take_array() {
    std::array<Byte, N> out{};
    fill(out);
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace securezone
