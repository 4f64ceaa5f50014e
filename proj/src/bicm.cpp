#include "scmasim/bicm.hpp"

#include <algorithm>
#include <numeric>

#include "scmasim/detector.hpp"
#include "scmasim/error.hpp"
#include "scmasim/rng.hpp"

namespace scmasim {

namespace {

class IdentityCodec final : public Codec {
 public:
  double rate() const override { return 1.0; }
  std::vector<uint8_t> encode(std::span<const uint8_t> message) const override {
    return {message.begin(), message.end()};
  }
  std::vector<uint8_t> decode(std::span<const double> llrs) const override {
    std::vector<uint8_t> bits(llrs.size());
    for (size_t i = 0; i < llrs.size(); ++i) bits[i] = llrs[i] >= 0 ? 0 : 1;
    return bits;
  }
};

class RepetitionCodec final : public Codec {
 public:
  explicit RepetitionCodec(int n) : n_(n) {
    if (n < 1) throw Error(Errc::invalid_config, "repetition factor must be >= 1");
  }
  double rate() const override { return 1.0 / n_; }
  std::vector<uint8_t> encode(std::span<const uint8_t> message) const override {
    std::vector<uint8_t> out;
    out.reserve(message.size() * n_);
    for (uint8_t b : message)
      for (int r = 0; r < n_; ++r) out.push_back(b);
    return out;
  }
  std::vector<uint8_t> decode(std::span<const double> llrs) const override {
    if (llrs.size() % n_ != 0)
      throw Error(Errc::length_mismatch, "LLR count not a multiple of the repeat factor");
    std::vector<uint8_t> bits(llrs.size() / n_);
    for (size_t i = 0; i < bits.size(); ++i) {
      double acc = 0;
      for (int r = 0; r < n_; ++r) acc += llrs[i * n_ + r];
      bits[i] = acc >= 0 ? 0 : 1;
    }
    return bits;
  }

 private:
  int n_;
};

}  // namespace

std::unique_ptr<Codec> make_identity_codec() { return std::make_unique<IdentityCodec>(); }
std::unique_ptr<Codec> make_repetition_codec(int n) {
  return std::make_unique<RepetitionCodec>(n);
}

FramePlan FramePlan::identity(int n_c, int bits_per_symbol) {
  if (n_c < 1 || bits_per_symbol < 1 || n_c % bits_per_symbol != 0)
    throw Error(Errc::invalid_config, "bits_per_symbol must divide the code length");
  FramePlan p;
  p.n_c = n_c;
  p.bits_per_symbol = bits_per_symbol;
  p.n_cu = n_c / bits_per_symbol;
  p.perm.resize(n_c);
  std::iota(p.perm.begin(), p.perm.end(), 0);
  return p;
}

FramePlan FramePlan::seeded(int n_c, int bits_per_symbol, uint64_t seed) {
  FramePlan p = identity(n_c, bits_per_symbol);
  rng::Stream st(seed, rng::kInterleave);
  for (int i = n_c - 1; i > 0; --i)  // Fisher-Yates with the counter stream
    std::swap(p.perm[i], p.perm[st.next_below(static_cast<uint32_t>(i + 1))]);
  return p;
}

std::vector<uint8_t> interleave(std::span<const uint8_t> bits, const FramePlan& plan) {
  if (static_cast<int>(bits.size()) != plan.n_c)
    throw Error(Errc::length_mismatch, "interleave: length != N_c");
  std::vector<uint8_t> out(bits.size());
  for (int i = 0; i < plan.n_c; ++i) out[i] = bits[plan.perm[i]];
  return out;
}

std::vector<double> deinterleave(std::span<const double> llrs, const FramePlan& plan) {
  if (static_cast<int>(llrs.size()) != plan.n_c)
    throw Error(Errc::length_mismatch, "deinterleave: length != N_c");
  std::vector<double> out(llrs.size());
  for (int i = 0; i < plan.n_c; ++i) out[plan.perm[i]] = llrs[i];
  return out;
}

std::vector<int> segment(std::span<const uint8_t> bits, int bits_per_symbol) {
  if (bits_per_symbol < 1 || bits.size() % bits_per_symbol != 0)
    throw Error(Errc::length_mismatch, "segment: bits_per_symbol must divide length");
  std::vector<int> labels(bits.size() / bits_per_symbol);
  for (size_t s = 0; s < labels.size(); ++s) {
    int v = 0;
    for (int b = 0; b < bits_per_symbol; ++b)  // big-endian groups
      v = (v << 1) | (bits[s * bits_per_symbol + b] & 1);
    labels[s] = v;
  }
  return labels;
}

std::vector<double> assemble(const std::vector<std::vector<double>>& llr_blocks) {
  std::vector<double> out;
  for (const auto& blk : llr_blocks) out.insert(out.end(), blk.begin(), blk.end());
  return out;
}

FrameOutcome run_coded_frame(const Codec& codec, const FramePlan& plan,
                             const SystemConfig& cfg, ChannelCase kase,
                             double snr_db, int mpa_iterations, bool collapse,
                             uint64_t seed) {
  const int K = cfg.K;
  const int bits = cfg.constellation.bits_per_symbol();
  if (plan.bits_per_symbol != bits)
    throw Error(Errc::invalid_config, "frame plan bits_per_symbol != log2(M)");
  const double rate = codec.rate();
  const int k_c = static_cast<int>(std::lround(plan.n_c * rate));
  if (std::abs(k_c / rate - plan.n_c) > 1e-9)
    throw Error(Errc::invalid_config, "N_c is not K_c / R for an integral K_c");

  const double n0 = n0_from_snr(snr_db, bits, rate);
  const ChannelRealization ch = draw_channel(kase, K, cfg.N, plan.n_cu, seed);
  const auto noise = draw_noise(cfg.N, plan.n_cu, n0, seed);

  // per-user message, encode, interleave, segment
  std::vector<std::vector<uint8_t>> msg(K);
  std::vector<std::vector<int>> tx_labels(K);
  for (int k = 0; k < K; ++k) {
    rng::Stream st(seed, rng::kData, static_cast<uint32_t>(k));
    msg[k].resize(k_c);
    for (auto& b : msg[k]) b = st.next_bit() ? 1 : 0;
    auto code = codec.encode(msg[k]);
    if (static_cast<int>(code.size()) != plan.n_c)
      throw Error(Errc::length_mismatch, "encoder output length != N_c");
    tx_labels[k] = segment(interleave(code, plan), bits);
  }

  Detector det(cfg, DetectorOptions{mpa_iterations, collapse, false});
  auto ws = det.make_workspace();
  DetectionResult res;

  std::vector<std::vector<std::vector<double>>> llr_blocks(
      K, std::vector<std::vector<double>>(plan.n_cu));
  std::vector<cplx> y(cfg.N), h(static_cast<size_t>(K) * cfg.N);
  std::vector<std::vector<cplx>> symbols(K);

  for (int i = 0; i < plan.n_cu; ++i) {
    for (int k = 0; k < K; ++k) {
      const int m = cfg.constellation.point_of_label(tx_labels[k][i]);
      symbols[k] = cfg.constellation.points[m];
      for (int n = 0; n < cfg.N; ++n)
        h[static_cast<size_t>(k) * cfg.N + n] = ch.at(k, n, i);
    }
    y = superimpose(cfg.maps, symbols, h, cfg.N,
                    std::span<const cplx>(noise.data() + static_cast<size_t>(i) * cfg.N,
                                          cfg.N));
    det.detect_into(y, h, n0, ws, res);
    for (int k = 0; k < K; ++k) llr_blocks[k][i] = res.bit_llrs[k];
  }

  FrameOutcome out;
  out.message_bits = k_c;
  out.bit_errors.assign(K, 0);
  out.frame_error.assign(K, 0);
  for (int k = 0; k < K; ++k) {
    const auto est = codec.decode(deinterleave(assemble(llr_blocks[k]), plan));
    if (static_cast<int>(est.size()) != k_c)
      throw Error(Errc::length_mismatch, "decoder output length != K_c");
    for (int b = 0; b < k_c; ++b)
      if (est[b] != msg[k][b]) ++out.bit_errors[k];
    out.frame_error[k] = out.bit_errors[k] > 0 ? 1 : 0;
  }
  return out;
}

}  // namespace scmasim
