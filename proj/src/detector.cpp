#include "scmasim/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scmasim/error.hpp"

namespace scmasim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Online log-sum-exp accumulator.
struct Lse {
  double mx = kNegInf;
  double sum = 0;

  void add(double x) {
    if (x == kNegInf) return;
    if (x > mx) {
      sum = (mx == kNegInf) ? 1.0 : sum * std::exp(mx - x) + 1.0;
      mx = x;
    } else {
      sum += std::exp(x - mx);
    }
  }
  double value() const { return (mx == kNegInf) ? kNegInf : mx + std::log(sum); }
};

void max_normalize(std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  for (double& x : v) x -= mx;
}

}  // namespace

std::vector<ProjectionTable> collapse_projections(const MultiDimConstellation& c,
                                                  const MappingMatrix& f) {
  if (f.dv() != c.dv)
    throw Error(Errc::dimension_mismatch, "mapping dv != constellation dv");
  std::vector<ProjectionTable> tables(c.dv);
  for (int j = 0; j < c.dv; ++j) {
    auto& t = tables[j];
    t.sym_to_value.resize(c.M);
    for (int m = 0; m < c.M; ++m) {
      const cplx v = c.points[m][j];
      int idx = -1;
      for (size_t i = 0; i < t.values.size(); ++i)
        if (t.values[i] == v) {  // exact grouping keeps collapsed detection bit-identical
          idx = static_cast<int>(i);
          break;
        }
      if (idx < 0) {
        idx = static_cast<int>(t.values.size());
        t.values.push_back(v);
      }
      t.sym_to_value[m] = idx;
    }
  }
  return tables;
}

Detector::Detector(const SystemConfig& cfg, DetectorOptions opt)
    : cfg_(cfg), opt_(opt) {
  cfg_.validate();
  if (opt_.iterations < 1)
    throw Error(Errc::invalid_config, "detector needs at least one iteration");
  M_ = cfg_.M();
  bits_ = cfg_.constellation.bits_per_symbol();

  std::vector<ReNode> by_re(cfg_.N);
  for (int n = 0; n < cfg_.N; ++n) by_re[n].re = n;
  user_edges_.resize(cfg_.K);
  tables_.resize(cfg_.K);
  for (int k = 0; k < cfg_.K; ++k) {
    const auto& f = cfg_.maps[k];
    if (opt_.collapse) {
      tables_[k] = collapse_projections(cfg_.constellation, f);
    } else {
      tables_[k].resize(f.dv());
      for (int j = 0; j < f.dv(); ++j) {
        auto& t = tables_[k][j];
        t.values.resize(M_);
        t.sym_to_value.resize(M_);
        for (int m = 0; m < M_; ++m) {
          t.values[m] = cfg_.constellation.points[m][j];
          t.sym_to_value[m] = m;
        }
      }
    }
    for (int j = 0; j < f.dv(); ++j) {
      const int e = n_edges_++;
      user_edges_[k].push_back(e);
      by_re[f.rows[j]].slots.push_back({k, j, e});
    }
  }
  for (auto& node : by_re)
    if (!node.slots.empty()) {
      if (node.slots.size() > 16)
        throw Error(Errc::invalid_config, "more than 16 users on one RE");
      res_.push_back(std::move(node));
    }
}

Detector::Workspace Detector::make_workspace() const {
  Workspace ws;
  ws.metric.resize(res_.size());
  for (size_t r = 0; r < res_.size(); ++r) {
    size_t total = 1;
    for (const auto& s : res_[r].slots)
      total *= tables_[s.user][s.dim].values.size();
    ws.metric[r].resize(total);
  }
  ws.f2v.assign(n_edges_, std::vector<double>(M_));
  ws.v2f.assign(n_edges_, std::vector<double>(M_));
  size_t max_slots = 0, max_vals = 0;
  for (const auto& node : res_) max_slots = std::max(max_slots, node.slots.size());
  for (int k = 0; k < cfg_.K; ++k)
    for (const auto& t : tables_[k]) max_vals = std::max(max_vals, t.values.size());
  ws.vmsg_val.assign(max_slots, std::vector<double>(max_vals));
  ws.hval.assign(max_slots, std::vector<cplx>(max_vals));
  ws.best_val.assign(max_slots, std::vector<double>(max_vals));
  return ws;
}

void Detector::function_update(std::span<const cplx> y, std::span<const cplx> h,
                               double n0, Workspace& ws) const {
  const double inv_n0 = 1.0 / n0;
  for (size_t r = 0; r < res_.size(); ++r) {
    const auto& node = res_[r];
    const int nslots = static_cast<int>(node.slots.size());
    const cplx yn = y[node.re];

    int sizes[16];
    size_t strides[16];
    size_t total = 1;
    for (int s = 0; s < nslots; ++s) {
      const auto& slot = node.slots[s];
      const auto& t = tables_[slot.user][slot.dim];
      sizes[s] = static_cast<int>(t.values.size());
      strides[s] = total;
      total *= t.values.size();
      const cplx hk = h[static_cast<size_t>(slot.user) * cfg_.N + node.re];
      for (int v = 0; v < sizes[s]; ++v) ws.hval[s][v] = hk * t.values[v];
    }

    // function-node metrics over value tuples
    auto& metric = ws.metric[r];
    int digits[16] = {0};
    for (size_t t = 0; t < total; ++t) {
      cplx acc = yn;
      for (int s = 0; s < nslots; ++s) acc -= ws.hval[s][digits[s]];
      metric[t] = -std::norm(acc) * inv_n0;
      for (int s = 0; s < nslots; ++s) {
        if (++digits[s] < sizes[s]) break;
        digits[s] = 0;
      }
    }

    // variable messages grouped per projected value
    for (int s = 0; s < nslots; ++s) {
      const auto& slot = node.slots[s];
      const auto& t = tables_[slot.user][slot.dim];
      const auto& v2f = ws.v2f[slot.edge];
      auto& vm = ws.vmsg_val[s];
      if (!opt_.sum_product) {
        std::fill(vm.begin(), vm.begin() + sizes[s], kNegInf);
        for (int m = 0; m < M_; ++m)
          vm[t.sym_to_value[m]] = std::max(vm[t.sym_to_value[m]], v2f[m]);
      } else {
        std::vector<Lse> acc(sizes[s]);
        for (int m = 0; m < M_; ++m) acc[t.sym_to_value[m]].add(v2f[m]);
        for (int v = 0; v < sizes[s]; ++v) vm[v] = acc[v].value();
      }
    }

    // function -> variable: reduce over the other slots' value tuples
    for (int s = 0; s < nslots; ++s) {
      auto& best = ws.best_val[s];
      std::vector<Lse> lse_best;
      if (opt_.sum_product)
        lse_best.resize(sizes[s]);
      else
        std::fill(best.begin(), best.begin() + sizes[s], kNegInf);

      int odometer[16] = {0};
      const size_t reduced = total / sizes[s];
      for (size_t t = 0; t < reduced; ++t) {
        double base = 0;
        size_t idx = 0;
        for (int sp = 0; sp < nslots; ++sp) {
          if (sp == s) continue;
          base += ws.vmsg_val[sp][odometer[sp]];
          idx += strides[sp] * odometer[sp];
        }
        if (!opt_.sum_product) {
          for (int v = 0; v < sizes[s]; ++v) {
            const double cand = metric[idx + strides[s] * v] + base;
            if (cand > best[v]) best[v] = cand;
          }
        } else {
          for (int v = 0; v < sizes[s]; ++v)
            lse_best[v].add(metric[idx + strides[s] * v] + base);
        }
        for (int sp = 0; sp < nslots; ++sp) {
          if (sp == s) continue;
          if (++odometer[sp] < sizes[sp]) break;
          odometer[sp] = 0;
        }
      }
      if (opt_.sum_product)
        for (int v = 0; v < sizes[s]; ++v) best[v] = lse_best[v].value();

      const auto& slot = node.slots[s];
      const auto& t = tables_[slot.user][slot.dim];
      auto& f2v = ws.f2v[slot.edge];
      for (int m = 0; m < M_; ++m) f2v[m] = best[t.sym_to_value[m]];
      max_normalize(f2v);
    }
  }
}

void Detector::detect_into(std::span<const cplx> y, std::span<const cplx> h,
                           double n0, Workspace& ws, DetectionResult& out) const {
  if (static_cast<int>(y.size()) != cfg_.N)
    throw Error(Errc::dimension_mismatch, "y must have N entries");
  if (static_cast<int>(h.size()) != cfg_.K * cfg_.N)
    throw Error(Errc::dimension_mismatch, "h must be K x N");
  if (!(n0 > 0)) throw Error(Errc::invalid_n0, "detect requires n0 > 0");

  for (auto& v : ws.v2f) std::fill(v.begin(), v.end(), 0.0);

  for (int it = 0; it < opt_.iterations; ++it) {
    function_update(y, h, n0, ws);
    if (it + 1 == opt_.iterations) break;
    for (int k = 0; k < cfg_.K; ++k) {
      const auto& edges = user_edges_[k];
      for (size_t j = 0; j < edges.size(); ++j) {
        auto& v2f = ws.v2f[edges[j]];
        std::fill(v2f.begin(), v2f.end(), 0.0);
        for (size_t jp = 0; jp < edges.size(); ++jp) {
          if (jp == j) continue;
          const auto& f2v = ws.f2v[edges[jp]];
          for (int m = 0; m < M_; ++m) v2f[m] += f2v[m];
        }
        max_normalize(v2f);
      }
    }
  }

  out.log_marginals.resize(cfg_.K);
  out.hard_symbols.resize(cfg_.K);
  out.bit_llrs.resize(cfg_.K);
  for (int k = 0; k < cfg_.K; ++k) {
    auto& marg = out.log_marginals[k];
    marg.assign(M_, 0.0);
    for (int e : user_edges_[k]) {
      const auto& f2v = ws.f2v[e];
      for (int m = 0; m < M_; ++m) marg[m] += f2v[m];
    }
    max_normalize(marg);
    for (double v : marg)
      if (std::isnan(v)) throw Error(Errc::non_finite, "non-finite log-marginal");

    int hard = 0;
    for (int m = 1; m < M_; ++m)
      if (marg[m] > marg[hard]) hard = m;  // ties keep the lowest index
    out.hard_symbols[k] = hard;

    auto& llrs = out.bit_llrs[k];
    llrs.assign(bits_, 0.0);
    const auto& labels = cfg_.constellation.labels;
    for (int b = 0; b < bits_; ++b) {
      double max0 = kNegInf, max1 = kNegInf;
      for (int m = 0; m < M_; ++m) {
        const bool bit = (labels[m] >> (bits_ - 1 - b)) & 1u;
        (bit ? max1 : max0) = std::max(bit ? max1 : max0, marg[m]);
      }
      llrs[b] = std::clamp(max0 - max1, -opt_.llr_clamp, opt_.llr_clamp);
    }
  }
}

DetectionResult Detector::detect(std::span<const cplx> y, std::span<const cplx> h,
                                 double n0) const {
  Workspace ws = make_workspace();
  DetectionResult out;
  detect_into(y, h, n0, ws, out);
  return out;
}

JointMapResult joint_map(std::span<const cplx> y, std::span<const cplx> h,
                         const SystemConfig& cfg, double n0) {
  cfg.validate();
  if (!(n0 > 0)) throw Error(Errc::invalid_n0, "joint_map requires n0 > 0");
  const int M = cfg.M();
  const int K = cfg.K;
  double hyp = 1;
  for (int k = 0; k < K; ++k) hyp *= M;
  if (hyp > static_cast<double>(1 << 20))
    throw Error(Errc::too_large, "M^K exceeds the 2^20 joint-MAP guard");
  const size_t total = static_cast<size_t>(hyp);
  const double inv_n0 = 1.0 / n0;

  // per-RE metric tables over the connected users' symbol tuples
  struct ReTab {
    std::vector<int> users, dims;
    std::vector<double> metric;
  };
  std::vector<ReTab> res;
  for (int n = 0; n < cfg.N; ++n) {
    ReTab t;
    for (int k = 0; k < K; ++k) {
      const auto& f = cfg.maps[k];
      for (int j = 0; j < f.dv(); ++j)
        if (f.rows[j] == n) {
          t.users.push_back(k);
          t.dims.push_back(j);
        }
    }
    if (t.users.empty()) continue;
    size_t tt = 1;
    for (size_t s = 0; s < t.users.size(); ++s) tt *= M;
    t.metric.resize(tt);
    std::vector<int> digits(t.users.size(), 0);
    for (size_t i = 0; i < tt; ++i) {
      cplx acc = y[n];
      for (size_t s = 0; s < t.users.size(); ++s)
        acc -= h[static_cast<size_t>(t.users[s]) * cfg.N + n] *
               cfg.constellation.points[digits[s]][t.dims[s]];
      t.metric[i] = -std::norm(acc) * inv_n0;
      for (size_t s = 0; s < digits.size(); ++s) {
        if (++digits[s] < M) break;
        digits[s] = 0;
      }
    }
    res.push_back(std::move(t));
  }

  std::vector<std::vector<double>> maxlog(K, std::vector<double>(M, kNegInf));
  std::vector<std::vector<Lse>> exact(K, std::vector<Lse>(M));
  std::vector<int> digits(K, 0);
  for (size_t t = 0; t < total; ++t) {
    double joint = 0;
    for (const auto& rt : res) {
      size_t idx = 0;
      size_t stride = 1;
      for (size_t s = 0; s < rt.users.size(); ++s) {
        idx += stride * static_cast<size_t>(digits[rt.users[s]]);
        stride *= M;
      }
      joint += rt.metric[idx];
    }
    for (int k = 0; k < K; ++k) {
      const int m = digits[k];
      maxlog[k][m] = std::max(maxlog[k][m], joint);
      exact[k][m].add(joint);
    }
    for (int k = 0; k < K; ++k) {
      if (++digits[k] < M) break;
      digits[k] = 0;
    }
  }

  JointMapResult out;
  out.maxlog_log_marginals = std::move(maxlog);
  out.exact_log_marginals.assign(K, std::vector<double>(M));
  out.exact_hard.resize(K);
  out.maxlog_hard.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int m = 0; m < M; ++m) out.exact_log_marginals[k][m] = exact[k][m].value();
    max_normalize(out.exact_log_marginals[k]);
    max_normalize(out.maxlog_log_marginals[k]);
    int he = 0, hm = 0;
    for (int m = 1; m < M; ++m) {
      if (out.exact_log_marginals[k][m] > out.exact_log_marginals[k][he]) he = m;
      if (out.maxlog_log_marginals[k][m] > out.maxlog_log_marginals[k][hm]) hm = m;
    }
    out.exact_hard[k] = he;
    out.maxlog_hard[k] = hm;
  }
  return out;
}

}  // namespace scmasim
