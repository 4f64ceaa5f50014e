#include "scmasim/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scmasim/error.hpp"

namespace scmasim {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int ilog2(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

// Position of a binary-reflected Gray code in the Gray sequence.
uint32_t gray_decode(uint32_t g) {
  uint32_t b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

// Gray-labeled sqrt(M)-level PAM: the axis bits select a level from the
// descending ladder +(n-1), +(n-3), ..., -(n-1).
double pam_level(uint32_t axis_bits, int levels) {
  const int rank = static_cast<int>(gray_decode(axis_bits));
  return static_cast<double>(levels - 1 - 2 * rank);
}

}  // namespace

int MultiDimConstellation::bits_per_symbol() const { return ilog2(M); }

int MultiDimConstellation::point_of_label(uint32_t label) const {
  for (int m = 0; m < M; ++m)
    if (labels[m] == label) return m;
  throw Error(Errc::invariant_violation, name + ": label " + std::to_string(label) + " not present");
}

void MultiDimConstellation::validate() const {
  if (!is_power_of_two(M))
    throw Error(Errc::invariant_violation, name + ": M must be a power of two");
  if (dv < 1) throw Error(Errc::invariant_violation, name + ": dv must be >= 1");
  if (static_cast<int>(points.size()) != M)
    throw Error(Errc::invariant_violation, name + ": points count != M");
  if (static_cast<int>(labels.size()) != M)
    throw Error(Errc::invariant_violation, name + ": labels count != M");
  std::set<uint32_t> seen;
  for (uint32_t l : labels) {
    if (l >= static_cast<uint32_t>(M))
      throw Error(Errc::invariant_violation, name + ": label out of range");
    if (!seen.insert(l).second)
      throw Error(Errc::invariant_violation, name + ": duplicate label");
  }
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != dv)
      throw Error(Errc::invariant_violation, name + ": point dimension != dv");
    for (cplx v : p)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::invariant_violation, name + ": non-finite coordinate");
  }
  const double es = average_energy(*this);
  if (es > 0) {
    const double scale2 = es;  // distinctness is judged at unit energy
    for (int m = 0; m < M; ++m)
      for (int mp = m + 1; mp < M; ++mp) {
        double d2 = 0;
        for (int j = 0; j < dv; ++j) d2 += std::norm(points[m][j] - points[mp][j]);
        if (d2 / scale2 <= 1e-18)
          throw Error(Errc::invariant_violation,
                      name + ": points " + std::to_string(m) + " and " +
                          std::to_string(mp) + " coincide");
      }
  }
}

double average_energy(const MultiDimConstellation& c) {
  double acc = 0;
  for (const auto& p : c.points)
    for (cplx v : p) acc += std::norm(v);
  return acc / static_cast<double>(c.M);
}

MultiDimConstellation normalize_energy(const MultiDimConstellation& c) {
  const double es = average_energy(c);
  if (es == 0.0) throw Error(Errc::zero_energy, c.name + ": zero average energy");
  const double s = 1.0 / std::sqrt(es);
  MultiDimConstellation out = c;
  for (auto& p : out.points)
    for (cplx& v : p) v *= s;
  return out;
}

MultiDimConstellation generate_lds(int M, int dv) {
  if (dv < 1) throw Error(Errc::unsupported_size, "M-LDS: dv must be >= 1");
  const int bits = is_power_of_two(M) ? ilog2(M) : -1;
  if (bits < 2 || bits % 2 != 0)
    throw Error(Errc::unsupported_size, "M-LDS requires square M-QAM (M = 4^t)");
  const int axis_bits = bits / 2;
  const int levels = 1 << axis_bits;

  MultiDimConstellation c;
  c.name = std::to_string(M) + "-LDS";
  c.M = M;
  c.dv = dv;
  for (uint32_t lab = 0; lab < static_cast<uint32_t>(M); ++lab) {
    const uint32_t bi = lab >> axis_bits;
    const uint32_t bq = lab & (levels - 1);
    const cplx q{pam_level(bi, levels), pam_level(bq, levels)};
    c.points.emplace_back(dv, q);
    c.labels.push_back(lab);
  }
  c = normalize_energy(c);
  c.validate();
  return c;
}

MultiDimConstellation generate_hypercube(int M, int dv) {
  if (dv < 1) throw Error(Errc::unsupported_size, "hypercube: dv must be >= 1");
  long long want = 1;
  for (int j = 0; j < dv; ++j) want *= 4;
  if (M != want)
    throw Error(Errc::unsupported_size, "hypercube requires M = 4^dv");

  MultiDimConstellation c;
  c.name = (M == 16 && dv == 2) ? "16HQAM" : std::to_string(M) + "HQAM";
  c.M = M;
  c.dv = dv;
  for (uint32_t lab = 0; lab < static_cast<uint32_t>(M); ++lab) {
    std::vector<cplx> p(dv);
    for (int j = 0; j < dv; ++j) {
      const uint32_t b = (lab >> (2 * (dv - 1 - j))) & 3u;  // first bits -> dim 0
      p[j] = cplx{pam_level(b >> 1, 2), pam_level(b & 1, 2)};
    }
    c.points.push_back(std::move(p));
    c.labels.push_back(lab);
  }
  c = normalize_energy(c);
  c.validate();
  return c;
}

namespace {

MultiDimConstellation make_t4qam() {
  // Rotated 4-PAM pair on the real axes; labels 00,10,01,11 in listed order.
  const double s = 1.0 / std::sqrt(10.0);
  MultiDimConstellation c;
  c.name = "T4QAM";
  c.M = 4;
  c.dv = 2;
  c.points = {{{3 * s, 0}, {1 * s, 0}},
              {{1 * s, 0}, {-3 * s, 0}},
              {{-1 * s, 0}, {3 * s, 0}},
              {{-3 * s, 0}, {-1 * s, 0}}};
  c.labels = {0b00, 0b10, 0b01, 0b11};
  return c;
}

MultiDimConstellation make_4lqam() {
  // Two independent BPSK axes: first label bit signs dim 0 (real axis),
  // second bit signs dim 1 (imaginary axis); bit 0 takes the negative value.
  const double a = std::sqrt(2.0) / 2.0;
  MultiDimConstellation c;
  c.name = "4LQAM";
  c.M = 4;
  c.dv = 2;
  for (uint32_t lab = 0; lab < 4; ++lab) {
    const double s1 = ((lab >> 1) & 1) ? a : -a;
    const double s2 = (lab & 1) ? a : -a;
    c.points.push_back({cplx{s1, 0}, cplx{0, s2}});
    c.labels.push_back(lab);
  }
  return c;
}

MultiDimConstellation make_4cqam() {
  MultiDimConstellation c;
  c.name = "4CQAM";
  c.M = 4;
  c.dv = 2;
  c.points = {{{1, 0}, {0, 0}},
              {{0, 0}, {0, 1}},
              {{0, 0}, {0, -1}},
              {{-1, 0}, {0, 0}}};
  c.labels = {0b00, 0b01, 0b10, 0b11};
  return c;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"T4QAM",  "4LQAM",  "4CQAM",
                                                 "4-LDS",  "16-LDS", "16HQAM"};
  return names;
}

MultiDimConstellation builtin(const std::string& name) {
  MultiDimConstellation c;
  if (name == "T4QAM")
    c = make_t4qam();
  else if (name == "4LQAM")
    c = make_4lqam();
  else if (name == "4CQAM")
    c = make_4cqam();
  else if (name == "4-LDS")
    return generate_lds(4, 2);
  else if (name == "16-LDS")
    return generate_lds(16, 2);
  else if (name == "16HQAM")
    return generate_hypercube(16, 2);
  else
    throw Error(Errc::unknown_name, "unknown builtin constellation: " + name);
  c = normalize_energy(c);
  c.validate();
  return c;
}

MultiDimConstellation load_constellation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
  MultiDimConstellation c;
  try {
    c.name = j.at("name").get<std::string>();
    c.M = j.at("M").get<int>();
    c.dv = j.at("dv").get<int>();
    for (const auto& l : j.at("labels")) c.labels.push_back(l.get<uint32_t>());
    for (const auto& pt : j.at("points")) {
      std::vector<cplx> p;
      for (const auto& comp : pt) {
        if (!comp.is_array() || comp.size() != 2)
          throw Error(Errc::parse_error, path + ": point component is not [re, im]");
        p.emplace_back(comp[0].get<double>(), comp[1].get<double>());
      }
      c.points.push_back(std::move(p));
    }
    const bool normalized = j.at("normalized").get<bool>();
    c.validate();
    if (normalized && std::abs(average_energy(c) - 1.0) > 1e-12)
      throw Error(Errc::invariant_violation,
                  path + ": file claims unit energy but |Es - 1| > 1e-12");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
  return c;
}

void save_constellation(const MultiDimConstellation& c, const std::string& path) {
  c.validate();
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
  const bool normalized = std::abs(average_energy(c) - 1.0) <= 1e-12;
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "{\n \"name\": " << nlohmann::json(c.name).dump() << ",\n";
  out << " \"M\": " << c.M << ",\n \"dv\": " << c.dv << ",\n";
  out << " \"labels\": [";
  for (int m = 0; m < c.M; ++m) out << (m ? ", " : "") << c.labels[m];
  out << "],\n \"points\": [\n";
  for (int m = 0; m < c.M; ++m) {
    out << "  [";
    for (int j = 0; j < c.dv; ++j) {
      out << (j ? ", " : "") << "[" << num(c.points[m][j].real()) << ", "
          << num(c.points[m][j].imag()) << "]";
    }
    out << "]" << (m + 1 < c.M ? "," : "") << "\n";
  }
  out << " ],\n \"normalized\": " << (normalized ? "true" : "false") << "\n}\n";
  if (!out) throw Error(Errc::io_error, "write failed: " + path);
}

MultiDimConstellation apply_rotation(const MultiDimConstellation& c,
                                     const std::vector<cplx>& phases) {
  if (static_cast<int>(phases.size()) != c.dv)
    throw Error(Errc::dimension_mismatch, "rotation needs dv phases");
  for (cplx p : phases)
    if (std::abs(std::abs(p) - 1.0) > 1e-9)
      throw Error(Errc::not_unitary, "phase magnitude differs from 1");
  MultiDimConstellation out = c;
  for (auto& p : out.points)
    for (int j = 0; j < c.dv; ++j) p[j] *= phases[j];
  return out;
}

MultiDimConstellation apply_rotation(const MultiDimConstellation& c,
                                     const std::vector<std::vector<cplx>>& u) {
  const int dv = c.dv;
  if (static_cast<int>(u.size()) != dv)
    throw Error(Errc::dimension_mismatch, "rotation matrix must be dv x dv");
  for (const auto& row : u)
    if (static_cast<int>(row.size()) != dv)
      throw Error(Errc::dimension_mismatch, "rotation matrix must be dv x dv");
  // unitarity: U U^H = I within 1e-9
  for (int r = 0; r < dv; ++r)
    for (int s = 0; s < dv; ++s) {
      cplx acc = 0;
      for (int t = 0; t < dv; ++t) acc += u[r][t] * std::conj(u[s][t]);
      const cplx want = (r == s) ? cplx{1, 0} : cplx{0, 0};
      if (std::abs(acc - want) > 1e-9)
        throw Error(Errc::not_unitary, "matrix is not unitary within 1e-9");
    }
  MultiDimConstellation out = c;
  for (int m = 0; m < c.M; ++m)
    for (int r = 0; r < dv; ++r) {
      cplx acc = 0;
      for (int t = 0; t < dv; ++t) acc += u[r][t] * c.points[m][t];
      out.points[m][r] = acc;
    }
  return out;
}

}  // namespace scmasim
