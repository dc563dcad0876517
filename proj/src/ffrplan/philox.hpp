#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ffr {

// Philox4x32-10 counter-based generator. Each 128-bit counter plus 64-bit key
// maps to an independent 128-bit output block, so any (drop, slot, stream)
// coordinate can be hashed to reproducible randomness regardless of evaluation
// order or thread schedule.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t prod0 = static_cast<uint64_t>(kMul0) * ctr[0];
      const uint64_t prod1 = static_cast<uint64_t>(kMul1) * ctr[2];
      const std::array<uint32_t, 4> next = {
          static_cast<uint32_t>(prod1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<uint32_t>(prod1),
          static_cast<uint32_t>(prod0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<uint32_t>(prod0),
      };
      ctr = next;
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Uniform double in (0, 1), never exactly 0 or 1 (safe for -log).
inline double u01_from_bits(uint32_t hi, uint32_t lo) {
  const uint64_t v = (static_cast<uint64_t>(hi) << 32) | lo;
  return static_cast<double>(v >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Deterministic stream of doubles addressed by (seed; ctr0..ctr3).
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)} {}

  // One block -> two uniforms; helpers below use the first.
  std::array<double, 2> uniform2(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) const {
    const auto b = Philox4x32::block({c0, c1, c2, c3}, key_);
    return {u01_from_bits(b[0], b[1]), u01_from_bits(b[2], b[3])};
  }

  double uniform(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) const {
    return uniform2(c0, c1, c2, c3)[0];
  }

  // Exp(1) variate, i.e. |H|^2 for unit-variance complex Gaussian H.
  double exponential(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) const {
    return -std::log(uniform(c0, c1, c2, c3));
  }

 private:
  std::array<uint32_t, 2> key_;
};

}  // namespace ffr
