#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scmasim/constellation.hpp"

namespace scmasim {

/// Fading correlation cases. "f"/"s" prefix: fast (independent per channel
/// use) vs quasi-static (constant over the codeword); "sc"/"ic" suffix: same
/// vs independent coefficients across a user's REs. fsc/fic are the uncoded
/// single-use variants. awgn means h == 1 (test use).
enum class ChannelCase { fsc, fic, ffsc, ffic, sfsc, sfic, awgn };

ChannelCase channel_case_from_string(const std::string& s);
std::string to_string(ChannelCase c);
bool is_coded_case(ChannelCase c);

struct ChannelRealization {
  int K = 0, N = 0, n_cu = 0;
  ChannelCase kase = ChannelCase::awgn;
  uint64_t seed = 0;
  std::vector<cplx> h;  // layout [k][n][i]

  cplx at(int k, int n, int i) const {
    return h[(static_cast<size_t>(k) * N + n) * n_cu + i];
  }
};

/// Marginally CN(0,1) per entry (fading cases), replicated per the case's
/// correlation structure, independent across users. Pure function of the seed.
ChannelRealization draw_channel(ChannelCase kase, int K, int N, int n_cu, uint64_t seed);

/// i.i.d. CN(0, n0) noise, layout [i][n] (n fastest). Throws Errc::invalid_n0.
std::vector<cplx> draw_noise(int N, int n_cu, double n0, uint64_t seed);

/// N0 for a unit-energy constellation at the given Eb/N0 (uncoded, R = 1) or
/// Emb/N0 (coded): N0 = 1 / (R * bits_per_symbol * 10^(snr_db/10)).
double n0_from_snr(double snr_db, int bits_per_symbol, double code_rate = 1.0);

namespace detail {
/// Single coefficient of the realization draw_channel would produce.
cplx channel_coeff(ChannelCase kase, int k, int n, int i, uint64_t seed);
}  // namespace detail

}  // namespace scmasim
