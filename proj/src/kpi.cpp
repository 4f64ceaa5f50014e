#include "scmasim/kpi.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scmasim/error.hpp"

namespace scmasim {

namespace {

constexpr double kTieRel = 1e-9;        // distance-tie tolerance (relative)
constexpr double kDimDiff2 = 1e-18;     // |delta|^2 above this -> dimension differs
constexpr double kProjTol = 1e-6;       // projection distinctness (absolute)

struct PairMetrics {
  std::vector<double> d2e;  // squared Euclidean distance per pair (m < m')
  std::vector<double> d2p;  // product of squared magnitudes over differing dims
  std::vector<int> hamming;
  std::vector<std::pair<int, int>> pairs;
};

PairMetrics pair_metrics(const MultiDimConstellation& c) {
  if (c.M < 2) throw Error(Errc::invariant_violation, "KPIs need at least 2 points");
  PairMetrics pm;
  for (int m = 0; m < c.M; ++m)
    for (int mp = m + 1; mp < c.M; ++mp) {
      double d2 = 0;
      double prod = 1;
      int ham = 0;
      for (int j = 0; j < c.dv; ++j) {
        const double a2 = std::norm(c.points[m][j] - c.points[mp][j]);
        d2 += a2;
        if (a2 > kDimDiff2) {
          prod *= a2;
          ++ham;
        }
      }
      if (ham == 0)
        throw Error(Errc::degenerate_pair,
                    "points " + std::to_string(m) + " and " + std::to_string(mp) +
                        " coincide in all dimensions");
      pm.d2e.push_back(d2);
      pm.d2p.push_back(prod);
      pm.hamming.push_back(ham);
      pm.pairs.emplace_back(m, mp);
    }
  return pm;
}

MinDistanceResult min_with_ties(const std::vector<double>& v,
                                const std::vector<std::pair<int, int>>& pairs) {
  MinDistanceResult r;
  r.d2_min = v[0];
  for (double x : v) r.d2_min = std::min(r.d2_min, x);
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] <= r.d2_min * (1 + kTieRel)) r.pairs.push_back(pairs[i]);
  return r;
}

}  // namespace

MinDistanceResult euclidean_min(const MultiDimConstellation& c) {
  const auto pm = pair_metrics(c);
  return min_with_ties(pm.d2e, pm.pairs);
}

double kissing_e(const MultiDimConstellation& c) {
  return 2.0 * static_cast<double>(euclidean_min(c).pairs.size()) / c.M;
}

MinDistanceResult product_min(const MultiDimConstellation& c) {
  const auto pm = pair_metrics(c);
  return min_with_ties(pm.d2p, pm.pairs);
}

double kissing_p(const MultiDimConstellation& c) {
  return 2.0 * static_cast<double>(product_min(c).pairs.size()) / c.M;
}

int diversity_order(const MultiDimConstellation& c) {
  const auto pm = pair_metrics(c);
  int L = c.dv;
  for (int h : pm.hamming) L = std::min(L, h);
  return L;
}

double distinct_points(const MultiDimConstellation& c) {
  double acc = 0;
  for (int j = 0; j < c.dv; ++j) {
    int count = 0;
    for (int m = 0; m < c.M; ++m) {
      bool duplicate = false;
      for (int mp = 0; mp < m && !duplicate; ++mp)
        duplicate = std::abs(c.points[m][j] - c.points[mp][j]) <= kProjTol;
      if (!duplicate) ++count;
    }
    acc += count;
  }
  return acc / c.dv;
}

bool gray_check(const MultiDimConstellation& c) {
  const auto e = euclidean_min(c);
  for (auto [m, mp] : e.pairs)
    if (std::popcount(c.labels[m] ^ c.labels[mp]) != 1) return false;
  return true;
}

KpiReport report(const MultiDimConstellation& c) {
  const auto pm = pair_metrics(c);
  const auto e = min_with_ties(pm.d2e, pm.pairs);
  const auto p = min_with_ties(pm.d2p, pm.pairs);
  KpiReport r;
  r.d2_e_min = e.d2_min;
  r.tau_e = 2.0 * static_cast<double>(e.pairs.size()) / c.M;
  r.d2_p_min = p.d2_min;
  r.tau_p = 2.0 * static_cast<double>(p.pairs.size()) / c.M;
  r.L = c.dv;
  for (int h : pm.hamming) r.L = std::min(r.L, h);
  r.Nd = distinct_points(c);
  r.gray = true;
  for (auto [m, mp] : e.pairs)
    if (std::popcount(c.labels[m] ^ c.labels[mp]) != 1) r.gray = false;
  return r;
}

std::string table_csv(const std::vector<MultiDimConstellation>& cs) {
  std::ostringstream os;
  os << "name,d2_e_min,tau_e,d2_p_min,tau_p,L,Nd,gray\n";
  char buf[64];
  auto g6 = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  for (const auto& c : cs) {
    const KpiReport r = report(c);
    os << c.name << "," << g6(r.d2_e_min) << "," << g6(r.tau_e) << ","
       << g6(r.d2_p_min) << "," << g6(r.tau_p) << "," << r.L << "," << g6(r.Nd)
       << "," << (r.gray ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace scmasim
