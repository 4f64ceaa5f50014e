#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "scmasim/channel.hpp"
#include "scmasim/scma.hpp"

namespace scmasim {

/// Pluggable channel code. Soft decode consumes one LLR per code bit
/// (positive favors bit 0) and returns the message bit estimate.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual double rate() const = 0;
  virtual std::vector<uint8_t> encode(std::span<const uint8_t> message) const = 0;
  virtual std::vector<uint8_t> decode(std::span<const double> llrs) const = 0;
};

std::unique_ptr<Codec> make_identity_codec();
std::unique_ptr<Codec> make_repetition_codec(int n);

/// Frame geometry plus the bit interleaver permutation.
struct FramePlan {
  int n_c = 0;
  int bits_per_symbol = 0;
  int n_cu = 0;
  std::vector<int> perm;  // interleaved[i] = input[perm[i]]

  static FramePlan identity(int n_c, int bits_per_symbol);
  static FramePlan seeded(int n_c, int bits_per_symbol, uint64_t seed);
};

std::vector<uint8_t> interleave(std::span<const uint8_t> bits, const FramePlan& plan);
std::vector<double> deinterleave(std::span<const double> llrs, const FramePlan& plan);

/// Big-endian groups of bits_per_symbol bits -> label values.
std::vector<int> segment(std::span<const uint8_t> bits, int bits_per_symbol);
/// Inverse stitching of per-symbol bit-LLR blocks into one code-bit LLR vector.
std::vector<double> assemble(const std::vector<std::vector<double>>& llr_blocks);

struct FrameOutcome {
  int message_bits = 0;                // per user
  std::vector<long long> bit_errors;   // per user
  std::vector<uint8_t> frame_error;    // per user
};

/// Full coded round trip for one frame: encode, interleave, map, spread,
/// superimpose per channel use, detect, deinterleave LLRs, decode.
FrameOutcome run_coded_frame(const Codec& codec, const FramePlan& plan,
                             const SystemConfig& cfg, ChannelCase kase,
                             double snr_db, int mpa_iterations, bool collapse,
                             uint64_t seed);

}  // namespace scmasim
