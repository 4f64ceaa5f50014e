#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scmasim/constellation.hpp"

namespace scmasim {

/// The seven performance indicators of a multidimensional constellation.
struct KpiReport {
  double d2_e_min = 0;  // squared minimum Euclidean distance
  double tau_e = 0;     // Euclidean kissing number, 2*pairs/M
  double d2_p_min = 0;  // squared minimum product distance
  double tau_p = 0;     // product kissing number, 2*pairs/M
  int L = 0;            // modulation diversity order
  double Nd = 0;        // mean distinct projections per complex dimension
  bool gray = false;
};

struct MinDistanceResult {
  double d2_min = 0;
  std::vector<std::pair<int, int>> pairs;  // every pair within 1e-9 relative of the min
};

MinDistanceResult euclidean_min(const MultiDimConstellation& c);
double kissing_e(const MultiDimConstellation& c);

/// Product over differing complex dimensions (|delta| > 1e-9) of squared
/// magnitudes. Throws Errc::degenerate_pair if two points coincide everywhere.
MinDistanceResult product_min(const MultiDimConstellation& c);
double kissing_p(const MultiDimConstellation& c);

int diversity_order(const MultiDimConstellation& c);

/// Distinct projected values per dimension (1e-6 absolute tolerance), averaged.
double distinct_points(const MultiDimConstellation& c);

/// True iff every minimum-Euclidean-distance pair differs in exactly one label bit.
bool gray_check(const MultiDimConstellation& c);

KpiReport report(const MultiDimConstellation& c);

/// CSV rows name,d2_e_min,tau_e,d2_p_min,tau_p,L,Nd,gray (6 significant digits).
std::string table_csv(const std::vector<MultiDimConstellation>& cs);

}  // namespace scmasim
