#pragma once

#include <span>
#include <vector>

#include "scmasim/constellation.hpp"

namespace scmasim {

/// Binary N x dv user-to-RE mapping, stored as the RE row of each column.
/// Columns are kept in increasing RE order.
struct MappingMatrix {
  int N = 0;
  std::vector<int> rows;  // rows[j] = RE carrying complex dimension j

  int dv() const { return static_cast<int>(rows.size()); }
  void validate() const;
};

/// N x K binary user-to-RE indicator matrix (regular: dv per column, dc per row).
struct IndicatorMatrix {
  int N = 0, K = 0, dv = 0, dc = 0;
  std::vector<uint8_t> entries;  // row-major N x K

  bool at(int n, int k) const { return entries[static_cast<size_t>(n) * K + k] != 0; }
  void validate() const;
};

/// The 4x6 indicator matrix used throughout (K=6, N=4, dv=2, dc=3).
IndicatorMatrix canonical_indicator();

/// All C(N, dv) dv-subsets of the N REs, columns in lexicographic order.
IndicatorMatrix full_load_indicator(int N, int dv);

MappingMatrix mapping_from_column(const IndicatorMatrix& s, int k);

/// N-vector with x placed at the user's REs.
std::vector<cplx> spread(const MappingMatrix& f, std::span<const cplx> x);

/// y = sum_k diag(h_k) F_k x_k + w. h is row-major K x N; noise may be empty.
std::vector<cplx> superimpose(const std::vector<MappingMatrix>& maps,
                              const std::vector<std::vector<cplx>>& symbols,
                              std::span<const cplx> h, int N,
                              std::span<const cplx> noise);

/// One multiple-access configuration: shared mother constellation plus the
/// per-user mappings. Users all employ the mother constellation directly.
struct SystemConfig {
  int K = 0, N = 0;
  MultiDimConstellation constellation;
  std::vector<MappingMatrix> maps;

  int M() const { return constellation.M; }

  /// Canonical K=6, N=4, dv=2, dc=3 system on the canonical indicator matrix.
  static SystemConfig canonical(MultiDimConstellation c);
  static SystemConfig from_indicator(const IndicatorMatrix& s, MultiDimConstellation c);
  /// Direct construction; permits irregular graphs (test configurations).
  static SystemConfig from_mappings(int N, std::vector<MappingMatrix> maps,
                                    MultiDimConstellation c);

  void validate() const;
};

}  // namespace scmasim
