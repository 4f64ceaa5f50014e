#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "scmasim/constellation.hpp"
#include "scmasim/error.hpp"
#include "scmasim/kpi.hpp"
#include "scmasim/rng.hpp"

using namespace scmasim;

namespace {

const std::string kDataDir = SCMASIM_DATA_DIR;

bool have(const std::string& file) {
  return std::filesystem::exists(kDataDir + "/" + file);
}

MultiDimConstellation raw(int M, int dv, std::vector<std::vector<cplx>> pts) {
  MultiDimConstellation c;
  c.name = "raw";
  c.M = M;
  c.dv = dv;
  c.points = std::move(pts);
  for (int m = 0; m < M; ++m) c.labels.push_back(m);
  return c;
}

double max_coord_diff(const MultiDimConstellation& a, const MultiDimConstellation& b) {
  double mx = 0;
  for (int m = 0; m < a.M; ++m)
    for (int j = 0; j < a.dv; ++j)
      mx = std::max(mx, std::abs(a.points[m][j] - b.points[m][j]));
  return mx;
}

}  // namespace

TEST_CASE("average energy") {
  CHECK(average_energy(builtin("4CQAM")) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(average_energy(raw(1, 2, {{{0, 0}, {0, 0}}})) == 0.0);
  // four points, each of squared norm 2
  CHECK(average_energy(raw(4, 2,
                           {{{1, 0}, {1, 0}},
                            {{0, 1}, {0, 1}},
                            {{-1, 0}, {-1, 0}},
                            {{0, -1}, {0, -1}}})) == doctest::Approx(2.0));
}

TEST_CASE("normalize energy") {
  const auto c = builtin("4CQAM");
  CHECK(max_coord_diff(c, normalize_energy(c)) < 1e-15);

  auto scaled = c;
  for (auto& p : scaled.points)
    for (auto& v : p) v *= 3.0;
  const auto back = normalize_energy(scaled);
  CHECK(average_energy(back) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_coord_diff(c, back) < 1e-12);  // same shape

  const auto lds = generate_lds(4, 2);
  CHECK(average_energy(lds) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_coord_diff(lds, normalize_energy(lds)) < 1e-15);

  CHECK_THROWS_AS(normalize_energy(raw(1, 1, {{{0, 0}}})), Error);
}

TEST_CASE("lds generator") {
  const auto c = generate_lds(4, 2);
  const int m11 = c.point_of_label(0b11);
  CHECK(c.points[m11][0] == cplx{-0.5, -0.5});
  CHECK(c.points[m11][1] == cplx{-0.5, -0.5});

  const auto qpsk = generate_lds(4, 1);
  CHECK(qpsk.dv == 1);
  CHECK(average_energy(qpsk) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gray_check(qpsk));

  const auto r = report(generate_lds(16, 2));
  CHECK(r.d2_e_min == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.tau_e == doctest::Approx(3.0));
  CHECK(r.d2_p_min == doctest::Approx(0.04).epsilon(1e-9));
  CHECK(r.tau_p == doctest::Approx(3.0));
  CHECK(r.L == 2);
  CHECK(r.Nd == doctest::Approx(16.0));
  CHECK(r.gray);

  CHECK_THROWS_AS(generate_lds(8, 2), Error);  // non-square
  CHECK_THROWS_AS(generate_lds(4, 0), Error);
}

TEST_CASE("hypercube generator") {
  const auto r = report(generate_hypercube(16, 2));
  CHECK(r.d2_e_min == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.tau_e == doctest::Approx(4.0));
  CHECK(r.d2_p_min == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.tau_p == doctest::Approx(8.0));
  CHECK(r.L == 1);
  CHECK(r.Nd == doctest::Approx(4.0));
  CHECK(r.gray);

  CHECK(distinct_points(generate_hypercube(16, 2)) == doctest::Approx(4.0));

  const auto qpsk = generate_hypercube(4, 1);
  CHECK(qpsk.M == 4);
  CHECK(average_energy(qpsk) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(generate_hypercube(8, 2), Error);
  CHECK_THROWS_AS(generate_hypercube(16, 3), Error);
}

TEST_CASE("builtins") {
  const auto cq = builtin("4CQAM");
  const int m01 = cq.point_of_label(0b01);
  CHECK(cq.points[m01][0] == cplx{0, 0});
  CHECK(cq.points[m01][1] == cplx{0, 1});

  const auto t4 = builtin("T4QAM");
  const double s = 1.0 / std::sqrt(10.0);
  const int t11 = t4.point_of_label(0b11);
  CHECK(std::abs(t4.points[t11][0] - cplx{-3 * s, 0}) < 1e-15);
  CHECK(std::abs(t4.points[t11][1] - cplx{-1 * s, 0}) < 1e-15);

  const auto r = report(t4);
  CHECK(r.d2_e_min == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.tau_e == doctest::Approx(2.0));
  CHECK(r.d2_p_min == doctest::Approx(0.64).epsilon(1e-9));
  CHECK(r.tau_p == doctest::Approx(2.0));
  CHECK(r.L == 2);
  CHECK(r.Nd == doctest::Approx(4.0));
  CHECK(r.gray);

  CHECK_THROWS_AS(builtin("no-such-thing"), Error);

  for (const auto& n : builtin_names()) {
    const auto c = builtin(n);
    CHECK(std::abs(average_energy(c) - 1.0) <= 1e-12);
    for (int m = 0; m < c.M; ++m) CHECK(c.point_of_label(c.labels[m]) == m);
  }
}

TEST_CASE("file round trip") {
  const auto tmp = std::filesystem::temp_directory_path() / "scmasim_rt.json";
  const auto c = builtin("4CQAM");
  save_constellation(c, tmp.string());
  const auto back = load_constellation(tmp.string());
  CHECK(max_coord_diff(c, back) < 1e-15);
  const auto r1 = report(c);
  const auto r2 = report(back);
  CHECK(r1.d2_e_min == r2.d2_e_min);
  CHECK(r1.d2_p_min == r2.d2_p_min);
  CHECK(r1.Nd == r2.Nd);
  std::filesystem::remove(tmp);
}

TEST_CASE("bundled 4bao example point") {
  if (!have("4bao.json")) {
    MESSAGE("SKIP: data file 4bao.json not bundled");
    return;
  }
  const auto c = load_constellation(kDataDir + "/4bao.json");
  const int m01 = c.point_of_label(0b01);
  // (re, im) per RE; second RE is the negation of the first
  CHECK(std::abs(c.points[m01][0] - cplx{0.5019, 0.4981}) < 5e-5);
  CHECK(std::abs(c.points[m01][1] - cplx{-0.5019, -0.4981}) < 5e-5);
}

TEST_CASE("bundled 16beko kissing number") {
  if (!have("16beko.json")) {
    MESSAGE("SKIP: data file 16beko.json not bundled");
    return;
  }
  const auto c = load_constellation(kDataDir + "/16beko.json");
  CHECK(kissing_e(c) == doctest::Approx(7.75).epsilon(1e-12));
}

TEST_CASE("loader rejects invalid files") {
  const auto tmp = std::filesystem::temp_directory_path() / "scmasim_bad.json";
  {
    std::ofstream f(tmp);
    f << "{ not json";
  }
  CHECK_THROWS_AS(load_constellation(tmp.string()), Error);
  {
    std::ofstream f(tmp);
    f << R"({"name":"x","M":2,"dv":1,"labels":[0,0],)"
      << R"("points":[[[1,0]],[[-1,0]]],"normalized":true})";
  }
  CHECK_THROWS_AS(load_constellation(tmp.string()), Error);  // duplicate label
  {
    std::ofstream f(tmp);
    f << R"({"name":"x","M":2,"dv":1,"labels":[0,1],)"
      << R"("points":[[[1,0]],[[1,0]]],"normalized":true})";
  }
  CHECK_THROWS_AS(load_constellation(tmp.string()), Error);  // coincident points
  CHECK_THROWS_AS(load_constellation("/nonexistent/file.json"), Error);
  std::filesystem::remove(tmp);
}

TEST_CASE("rotations") {
  const auto c = builtin("4CQAM");

  const auto same = apply_rotation(c, std::vector<cplx>{{1, 0}, {1, 0}});
  CHECK(max_coord_diff(c, same) == 0.0);

  const auto rot = apply_rotation(c, std::vector<cplx>{{0, 1}, {1, 0}});
  CHECK(euclidean_min(rot).d2_min == doctest::Approx(2.0).epsilon(1e-9));

  // quarter-turn phase on every dimension leaves the whole report unchanged
  const auto q = apply_rotation(builtin("4-LDS"), std::vector<cplx>{{0, 1}, {0, 1}});
  const auto r0 = report(builtin("4-LDS"));
  const auto r1 = report(q);
  CHECK(r1.d2_e_min == doctest::Approx(r0.d2_e_min).epsilon(1e-12));
  CHECK(r1.d2_p_min == doctest::Approx(r0.d2_p_min).epsilon(1e-12));
  CHECK(r1.tau_e == r0.tau_e);
  CHECK(r1.tau_p == r0.tau_p);
  CHECK(r1.L == r0.L);
  CHECK(r1.Nd == r0.Nd);
  CHECK(r1.gray == r0.gray);

  CHECK_THROWS_AS(apply_rotation(c, std::vector<cplx>{{2, 0}, {1, 0}}), Error);
  CHECK_THROWS_AS(apply_rotation(c, std::vector<cplx>{{1, 0}}), Error);
  CHECK_THROWS_AS(
      apply_rotation(c, std::vector<std::vector<cplx>>{{{1, 0}, {1, 0}},
                                                       {{0, 0}, {1, 0}}}),
      Error);
}

TEST_CASE("distance invariance under per-dimension phases") {
  for (const auto& name : builtin_names()) {
    const auto c = builtin(name);
    std::vector<cplx> phases;
    for (int j = 0; j < c.dv; ++j)
      phases.push_back(std::polar(1.0, 0.3 + 0.9 * j));
    const auto r = apply_rotation(c, phases);
    for (int m = 0; m < c.M; ++m)
      for (int mp = m + 1; mp < c.M; ++mp) {
        double d0 = 0, d1 = 0, p0 = 1, p1 = 1;
        for (int j = 0; j < c.dv; ++j) {
          const double a0 = std::norm(c.points[m][j] - c.points[mp][j]);
          const double a1 = std::norm(r.points[m][j] - r.points[mp][j]);
          d0 += a0;
          d1 += a1;
          if (a0 > 1e-18) p0 *= a0;
          if (a1 > 1e-18) p1 *= a1;
        }
        CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
        CHECK(p1 == doctest::Approx(p0).epsilon(1e-9));
      }
  }
}

TEST_CASE("euclidean invariance under a general unitary") {
  const auto c = builtin("T4QAM");
  const double t = 0.7, ph = 1.1;
  const std::vector<std::vector<cplx>> u = {
      {std::cos(t), -std::sin(t) * std::polar(1.0, ph)},
      {std::sin(t) * std::polar(1.0, -ph), std::cos(t)}};
  const auto r = apply_rotation(c, u);
  CHECK(average_energy(r) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(euclidean_min(r).d2_min ==
        doctest::Approx(euclidean_min(c).d2_min).epsilon(1e-9));
}

TEST_CASE("lds projections identical across dimensions") {
  for (int M : {4, 16}) {
    const auto c = generate_lds(M, 3);
    for (int m = 0; m < c.M; ++m)
      for (int j = 1; j < c.dv; ++j)
        CHECK(std::abs(c.points[m][j] - c.points[m][0]) <= 1e-15);
  }
}
