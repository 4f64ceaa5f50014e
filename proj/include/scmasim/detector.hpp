#pragma once

#include <span>
#include <vector>

#include "scmasim/scma.hpp"

namespace scmasim {

/// Distinct projected values of one user dimension on its RE, with the
/// symbol -> value-index map. Grouping is by exact coordinate equality so a
/// collapsed detection is bit-identical to the uncollapsed one.
struct ProjectionTable {
  std::vector<cplx> values;
  std::vector<int> sym_to_value;  // length M
};

/// One table per occupied RE (per complex dimension of the constellation).
std::vector<ProjectionTable> collapse_projections(const MultiDimConstellation& c,
                                                  const MappingMatrix& f);

struct DetectionResult {
  std::vector<std::vector<double>> log_marginals;  // K x M, max-normalized to 0
  std::vector<int> hard_symbols;                   // argmax point index per user
  std::vector<std::vector<double>> bit_llrs;       // K x log2(M); > 0 favors bit 0
};

struct DetectorOptions {
  int iterations = 3;
  bool collapse = false;     // enumerate distinct projections instead of symbols
  bool sum_product = false;  // exact log-sum-exp updates instead of max-log
  double llr_clamp = 50.0;
};

/// Log-domain message passing on the user/RE factor graph.
class Detector {
 public:
  Detector(const SystemConfig& cfg, DetectorOptions opt);

  struct Workspace;

  /// y: N received values for one channel use; h: row-major K x N coefficients.
  DetectionResult detect(std::span<const cplx> y, std::span<const cplx> h,
                         double n0) const;
  void detect_into(std::span<const cplx> y, std::span<const cplx> h, double n0,
                   Workspace& ws, DetectionResult& out) const;

  Workspace make_workspace() const;
  const DetectorOptions& options() const { return opt_; }

  struct Workspace {
    std::vector<std::vector<double>> metric;    // per RE, per value tuple
    std::vector<std::vector<double>> f2v;       // per edge, per symbol
    std::vector<std::vector<double>> v2f;       // per edge, per symbol
    std::vector<std::vector<double>> vmsg_val;  // per slot, per value (scratch)
    std::vector<std::vector<cplx>> hval;        // per slot, h * value (scratch)
    std::vector<std::vector<double>> best_val;  // per slot, per value (scratch)
  };

 private:
  struct Slot {  // one edge seen from its RE
    int user, dim, edge;
  };
  struct ReNode {
    int re;
    std::vector<Slot> slots;  // ascending user order
  };

  void function_update(std::span<const cplx> y, std::span<const cplx> h, double n0,
                       Workspace& ws) const;

  SystemConfig cfg_;
  DetectorOptions opt_;
  int M_ = 0, bits_ = 0, n_edges_ = 0;
  std::vector<ReNode> res_;                              // active REs
  std::vector<std::vector<int>> user_edges_;             // per user, edge ids (dim order)
  std::vector<std::vector<ProjectionTable>> tables_;     // per user, per dim
};

struct JointMapResult {
  std::vector<std::vector<double>> exact_log_marginals;   // log-sum-exp, max = 0
  std::vector<std::vector<double>> maxlog_log_marginals;  // max-log, max = 0
  std::vector<int> exact_hard;
  std::vector<int> maxlog_hard;
};

/// Exhaustive enumeration of all M^K hypothesis tuples (guard: M^K <= 2^20).
JointMapResult joint_map(std::span<const cplx> y, std::span<const cplx> h,
                         const SystemConfig& cfg, double n0);

}  // namespace scmasim
