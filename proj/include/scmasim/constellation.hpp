#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace scmasim {

using cplx = std::complex<double>;

/// M labeled points in dv complex dimensions. Immutable once built; all
/// factory functions return unit-average-energy, validated constellations.
struct MultiDimConstellation {
  std::string name;
  int M = 0;
  int dv = 0;
  std::vector<std::vector<cplx>> points;  // M rows of dv complex values
  std::vector<uint32_t> labels;           // labels[m] = bit label of points[m]

  int bits_per_symbol() const;

  /// Index m with labels[m] == label.
  int point_of_label(uint32_t label) const;

  /// Throws Errc::invariant_violation naming the first failed invariant.
  void validate() const;
};

double average_energy(const MultiDimConstellation& c);

/// Scale so average_energy == 1 (within 1e-12). Throws Errc::zero_energy.
MultiDimConstellation normalize_energy(const MultiDimConstellation& c);

/// Gray-labeled square M-QAM repeated identically over dv dimensions ("M-LDS").
MultiDimConstellation generate_lds(int M, int dv);

/// Per-dimension Gray QPSK, independent across dimensions; requires M = 4^dv.
MultiDimConstellation generate_hypercube(int M, int dv);

/// Built-in catalog: T4QAM, 4LQAM, 4CQAM, 4-LDS, 16-LDS, 16HQAM.
MultiDimConstellation builtin(const std::string& name);
const std::vector<std::string>& builtin_names();

MultiDimConstellation load_constellation(const std::string& path);
void save_constellation(const MultiDimConstellation& c, const std::string& path);

/// Per-dimension phase rotation; phases must have unit magnitude within 1e-9.
MultiDimConstellation apply_rotation(const MultiDimConstellation& c,
                                     const std::vector<cplx>& phases);

/// General dv x dv rotation; must be unitary within 1e-9.
MultiDimConstellation apply_rotation(const MultiDimConstellation& c,
                                     const std::vector<std::vector<cplx>>& unitary);

}  // namespace scmasim
