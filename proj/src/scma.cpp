#include "scmasim/scma.hpp"

#include <algorithm>

#include "scmasim/error.hpp"

namespace scmasim {

void MappingMatrix::validate() const {
  if (N < 1 || rows.empty())
    throw Error(Errc::invariant_violation, "mapping matrix is empty");
  for (size_t j = 0; j < rows.size(); ++j) {
    if (rows[j] < 0 || rows[j] >= N)
      throw Error(Errc::invariant_violation, "mapping row out of range");
    if (j > 0 && rows[j] <= rows[j - 1])
      throw Error(Errc::invariant_violation, "mapping rows must be strictly increasing");
  }
}

void IndicatorMatrix::validate() const {
  if (static_cast<int>(entries.size()) != N * K)
    throw Error(Errc::invariant_violation, "indicator entries size mismatch");
  for (int k = 0; k < K; ++k) {
    int sum = 0;
    for (int n = 0; n < N; ++n) sum += at(n, k) ? 1 : 0;
    if (sum != dv)
      throw Error(Errc::invariant_violation, "indicator column sum != dv");
  }
  for (int n = 0; n < N; ++n) {
    int sum = 0;
    for (int k = 0; k < K; ++k) sum += at(n, k) ? 1 : 0;
    if (sum != dc)
      throw Error(Errc::invariant_violation, "indicator row sum != dc");
  }
  for (int k = 0; k < K; ++k)
    for (int kp = k + 1; kp < K; ++kp) {
      bool same = true;
      for (int n = 0; n < N && same; ++n) same = at(n, k) == at(n, kp);
      if (same)
        throw Error(Errc::invariant_violation, "two identical indicator columns");
    }
}

IndicatorMatrix canonical_indicator() {
  IndicatorMatrix s;
  s.N = 4;
  s.K = 6;
  s.dv = 2;
  s.dc = 3;
  s.entries = {
      0, 1, 1, 0, 1, 0,
      1, 0, 1, 0, 0, 1,
      0, 1, 0, 1, 0, 1,
      1, 0, 0, 1, 1, 0,
  };
  s.validate();
  return s;
}

IndicatorMatrix full_load_indicator(int N, int dv) {
  if (dv < 1 || dv > N)
    throw Error(Errc::invalid_config, "full load requires 1 <= dv <= N");
  IndicatorMatrix s;
  s.N = N;
  s.dv = dv;
  std::vector<int> subset(dv);
  for (int j = 0; j < dv; ++j) subset[j] = j;
  std::vector<std::vector<int>> subsets;
  while (true) {
    subsets.push_back(subset);
    int j = dv - 1;
    while (j >= 0 && subset[j] == N - dv + j) --j;
    if (j < 0) break;
    ++subset[j];
    for (int t = j + 1; t < dv; ++t) subset[t] = subset[t - 1] + 1;
  }
  s.K = static_cast<int>(subsets.size());
  s.dc = s.K * dv / N;
  s.entries.assign(static_cast<size_t>(N) * s.K, 0);
  for (int k = 0; k < s.K; ++k)
    for (int row : subsets[k]) s.entries[static_cast<size_t>(row) * s.K + k] = 1;
  s.validate();
  return s;
}

MappingMatrix mapping_from_column(const IndicatorMatrix& s, int k) {
  if (k < 0 || k >= s.K) throw Error(Errc::invalid_config, "column index out of range");
  MappingMatrix f;
  f.N = s.N;
  for (int n = 0; n < s.N; ++n)
    if (s.at(n, k)) f.rows.push_back(n);
  f.validate();
  return f;
}

std::vector<cplx> spread(const MappingMatrix& f, std::span<const cplx> x) {
  if (static_cast<int>(x.size()) != f.dv())
    throw Error(Errc::dimension_mismatch, "spread: point dimension != dv");
  std::vector<cplx> v(f.N, cplx{0, 0});
  for (int j = 0; j < f.dv(); ++j) v[f.rows[j]] = x[j];
  return v;
}

std::vector<cplx> superimpose(const std::vector<MappingMatrix>& maps,
                              const std::vector<std::vector<cplx>>& symbols,
                              std::span<const cplx> h, int N,
                              std::span<const cplx> noise) {
  const int K = static_cast<int>(maps.size());
  if (static_cast<int>(symbols.size()) != K)
    throw Error(Errc::dimension_mismatch, "superimpose: one symbol per user required");
  if (static_cast<int>(h.size()) != K * N)
    throw Error(Errc::dimension_mismatch, "superimpose: h must be K x N");
  if (!noise.empty() && static_cast<int>(noise.size()) != N)
    throw Error(Errc::dimension_mismatch, "superimpose: noise must have N entries");
  std::vector<cplx> y(N, cplx{0, 0});
  for (int k = 0; k < K; ++k) {
    const auto& f = maps[k];
    if (f.N != N || static_cast<int>(symbols[k].size()) != f.dv())
      throw Error(Errc::dimension_mismatch, "superimpose: inconsistent mapping");
    for (int j = 0; j < f.dv(); ++j) {
      const int n = f.rows[j];
      y[n] += h[static_cast<size_t>(k) * N + n] * symbols[k][j];
    }
  }
  if (!noise.empty())
    for (int n = 0; n < N; ++n) y[n] += noise[n];
  return y;
}

SystemConfig SystemConfig::canonical(MultiDimConstellation c) {
  return from_indicator(canonical_indicator(), std::move(c));
}

SystemConfig SystemConfig::from_indicator(const IndicatorMatrix& s,
                                          MultiDimConstellation c) {
  s.validate();
  SystemConfig cfg;
  cfg.K = s.K;
  cfg.N = s.N;
  cfg.constellation = std::move(c);
  for (int k = 0; k < s.K; ++k) cfg.maps.push_back(mapping_from_column(s, k));
  cfg.validate();
  return cfg;
}

SystemConfig SystemConfig::from_mappings(int N, std::vector<MappingMatrix> maps,
                                         MultiDimConstellation c) {
  SystemConfig cfg;
  cfg.K = static_cast<int>(maps.size());
  cfg.N = N;
  cfg.constellation = std::move(c);
  cfg.maps = std::move(maps);
  cfg.validate();
  return cfg;
}

void SystemConfig::validate() const {
  constellation.validate();
  if (K < 1 || N < 1 || static_cast<int>(maps.size()) != K)
    throw Error(Errc::invalid_config, "system config has no users");
  for (const auto& f : maps) {
    f.validate();
    if (f.N != N) throw Error(Errc::invalid_config, "mapping N mismatch");
    if (f.dv() != constellation.dv)
      throw Error(Errc::invalid_config, "mapping dv != constellation dv");
  }
}

}  // namespace scmasim
