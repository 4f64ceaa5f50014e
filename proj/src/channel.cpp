#include "scmasim/channel.hpp"

#include <cmath>

#include "scmasim/error.hpp"
#include "scmasim/rng.hpp"

namespace scmasim {

ChannelCase channel_case_from_string(const std::string& s) {
  if (s == "fsc") return ChannelCase::fsc;
  if (s == "fic") return ChannelCase::fic;
  if (s == "ffsc") return ChannelCase::ffsc;
  if (s == "ffic") return ChannelCase::ffic;
  if (s == "sfsc") return ChannelCase::sfsc;
  if (s == "sfic") return ChannelCase::sfic;
  if (s == "awgn") return ChannelCase::awgn;
  throw Error(Errc::unknown_name, "unknown channel case: " + s);
}

std::string to_string(ChannelCase c) {
  switch (c) {
    case ChannelCase::fsc: return "fsc";
    case ChannelCase::fic: return "fic";
    case ChannelCase::ffsc: return "ffsc";
    case ChannelCase::ffic: return "ffic";
    case ChannelCase::sfsc: return "sfsc";
    case ChannelCase::sfic: return "sfic";
    case ChannelCase::awgn: return "awgn";
  }
  throw Error(Errc::invalid_config, "bad channel case");
}

bool is_coded_case(ChannelCase c) {
  return c == ChannelCase::ffsc || c == ChannelCase::ffic ||
         c == ChannelCase::sfsc || c == ChannelCase::sfic;
}

namespace detail {

// Replication keys: a coefficient shared across an index is drawn with that
// index pinned to 0, so the same value reappears wherever it is shared.
cplx channel_coeff(ChannelCase kase, int k, int n, int i, uint64_t seed) {
  switch (kase) {
    case ChannelCase::awgn: return {1.0, 0.0};
    case ChannelCase::fsc:
    case ChannelCase::sfsc: return rng::cn01(seed, rng::kChannel, k, 0, 0);
    case ChannelCase::fic:
    case ChannelCase::sfic: return rng::cn01(seed, rng::kChannel, k, n + 1, 0);
    case ChannelCase::ffsc: return rng::cn01(seed, rng::kChannel, k, 0, i + 1);
    case ChannelCase::ffic: return rng::cn01(seed, rng::kChannel, k, n + 1, i + 1);
  }
  throw Error(Errc::invalid_config, "bad channel case");
}

}  // namespace detail

ChannelRealization draw_channel(ChannelCase kase, int K, int N, int n_cu,
                                uint64_t seed) {
  if (K < 1 || N < 1 || n_cu < 1)
    throw Error(Errc::invalid_config, "channel dims must be >= 1");
  ChannelRealization r;
  r.K = K;
  r.N = N;
  r.n_cu = n_cu;
  r.kase = kase;
  r.seed = seed;
  r.h.resize(static_cast<size_t>(K) * N * n_cu);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n)
      for (int i = 0; i < n_cu; ++i)
        r.h[(static_cast<size_t>(k) * N + n) * n_cu + i] =
            detail::channel_coeff(kase, k, n, i, seed);
  return r;
}

std::vector<cplx> draw_noise(int N, int n_cu, double n0, uint64_t seed) {
  if (!(n0 > 0) || !std::isfinite(n0))
    throw Error(Errc::invalid_n0, "noise variance must be positive and finite");
  const double s = std::sqrt(n0);
  std::vector<cplx> w(static_cast<size_t>(N) * n_cu);
  for (int i = 0; i < n_cu; ++i)
    for (int n = 0; n < N; ++n)
      w[static_cast<size_t>(i) * N + n] = s * rng::cn01(seed, rng::kNoise, n, i, 0);
  return w;
}

double n0_from_snr(double snr_db, int bits_per_symbol, double code_rate) {
  if (bits_per_symbol < 1)
    throw Error(Errc::invalid_config, "bits_per_symbol must be >= 1");
  if (!(code_rate > 0.0) || code_rate > 1.0)
    throw Error(Errc::invalid_config, "code rate must be in (0, 1]");
  return 1.0 / (code_rate * bits_per_symbol * std::pow(10.0, snr_db / 10.0));
}

}  // namespace scmasim
