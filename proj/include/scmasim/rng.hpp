#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace scmasim::rng {

// Counter-based generation (Philox4x32-10). Every draw is a pure function of
// (key, counter), so realizations do not depend on evaluation order, thread
// count, or how many other draws happened first. Keys are 64-bit seeds; the
// 128-bit counter carries a domain tag plus user/RE/channel-use indices.

enum Domain : uint32_t {
  kChannel = 1,
  kNoise = 2,
  kData = 3,
  kInterleave = 4,
  kTrial = 5,
  kMisc = 6,
};

inline std::array<uint32_t, 4> philox4x32(uint64_t key, std::array<uint32_t, 4> ctr) {
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = uint64_t{0xD2511F53u} * ctr[0];
    const uint64_t p1 = uint64_t{0xCD9E8D57u} * ctr[2];
    ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ k0, static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ k1, static_cast<uint32_t>(p0)};
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return ctr;
}

inline uint64_t u64(uint64_t key, uint32_t domain, uint32_t a, uint32_t b, uint32_t c) {
  const auto w = philox4x32(key, {domain, a, b, c});
  return (uint64_t{w[0]} << 32) | w[1];
}

/// Two independent N(0,1) draws (Box-Muller on one Philox block).
inline std::array<double, 2> normal_pair(uint64_t key, uint32_t domain, uint32_t a,
                                         uint32_t b, uint32_t c) {
  const auto w = philox4x32(key, {domain, a, b, c});
  const uint64_t x = (uint64_t{w[0]} << 32) | w[1];
  const uint64_t y = (uint64_t{w[2]} << 32) | w[3];
  const double u1 = static_cast<double>((x >> 11) + 1) * 0x1p-53;  // (0,1]
  const double u2 = static_cast<double>(y >> 11) * 0x1p-53;        // [0,1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

/// One CN(0,1) draw: unit total variance, i.i.d. real/imag parts.
inline std::complex<double> cn01(uint64_t key, uint32_t domain, uint32_t a, uint32_t b,
                                 uint32_t c) {
  const auto z = normal_pair(key, domain, a, b, c);
  return {z[0] * std::numbers::sqrt2 / 2.0, z[1] * std::numbers::sqrt2 / 2.0};
}

/// Derive a sub-seed, e.g. per (snr index, trial index).
inline uint64_t derive_seed(uint64_t master, uint32_t a, uint64_t b) {
  return u64(master, kTrial, a, static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32));
}

/// Sequential word stream over a fixed key and (domain, a) prefix.
class Stream {
 public:
  Stream(uint64_t key, uint32_t domain, uint32_t a = 0)
      : key_(key), domain_(domain), a_(a) {}

  uint32_t next_u32() {
    if (pos_ == 4) {
      block_ = philox4x32(key_, {domain_, a_, static_cast<uint32_t>(ctr_),
                                 static_cast<uint32_t>(ctr_ >> 32)});
      ++ctr_;
      pos_ = 0;
    }
    return block_[pos_++];
  }

  uint64_t next_u64() {
    const uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform in [0, n) without modulo bias (rejection sampling).
  uint32_t next_below(uint32_t n) {
    const uint64_t span = uint64_t{1} << 32;
    const uint64_t bound = span - span % n;  // largest multiple of n in range
    uint64_t v = next_u32();
    while (v >= bound) v = next_u32();
    return static_cast<uint32_t>(v % n);
  }

  bool next_bit() { return (next_u32() & 1u) != 0; }

 private:
  uint64_t key_;
  uint32_t domain_, a_;
  uint64_t ctr_ = 0;
  std::array<uint32_t, 4> block_{};
  int pos_ = 4;
};

}  // namespace scmasim::rng
