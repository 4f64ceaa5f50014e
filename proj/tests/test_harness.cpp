#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "scmasim/config.hpp"
#include "scmasim/error.hpp"
#include "scmasim/harness.hpp"

using namespace scmasim;

namespace {

SweepConfig base_config() {
  SweepConfig cfg;
  cfg.system = SystemConfig::canonical(builtin("4-LDS"));
  cfg.channel = ChannelCase::fic;
  cfg.mode = SweepMode::uncoded_symbol;
  cfg.snr_db = {6, 10};
  cfg.min_error_events = 50;
  cfg.max_trials = 20000;
  cfg.seed = 42;
  cfg.mpa_iterations = 3;
  return cfg;
}

}  // namespace

TEST_CASE("deterministic across repeats and worker counts") {
  auto cfg = base_config();
  const auto a = to_csv(run_sweep(cfg));
  const auto b = to_csv(run_sweep(cfg));
  CHECK(a == b);
  cfg.workers = 3;
  CHECK(to_csv(run_sweep(cfg)) == a);
}

TEST_CASE("empty grid gives an empty result") {
  auto cfg = base_config();
  cfg.snr_db = {};
  const auto r = run_sweep(cfg);
  CHECK(r.points.empty());
  CHECK(to_csv(r) ==
        "snr_db,trials,sym_err,bit_err,frame_err,ser,ber,fer,ser_ci,ber_ci,fer_ci\n");
}

TEST_CASE("stopping rule is evaluated at batch boundaries") {
  auto cfg = base_config();
  cfg.snr_db = {0.0};  // lots of errors immediately
  cfg.min_error_events = 10;
  cfg.batch_size = 512;
  const auto r = run_sweep(cfg);
  CHECK(r.points[0].trials == 512);

  // error-free setting (single user, h == 1) runs to the trial cap
  SweepConfig awgn = base_config();
  MappingMatrix f;
  f.N = 2;
  f.rows = {0, 1};
  awgn.system = SystemConfig::from_mappings(2, {f}, builtin("4-LDS"));
  awgn.channel = ChannelCase::awgn;
  awgn.snr_db = {30.0};
  awgn.max_trials = 1024;
  awgn.batch_size = 256;
  const auto ra = run_sweep(awgn);
  CHECK(ra.points[0].trials == 1024);
  CHECK(ra.points[0].sym_err == 0);
  CHECK(ra.points[0].ser == 0.0);
}

TEST_CASE("rates and denominators") {
  auto cfg = base_config();
  cfg.snr_db = {8.0};
  const auto r = run_sweep(cfg);
  const auto& p = r.points[0];
  CHECK(p.sym_den == p.trials * 6);
  CHECK(p.bit_den == p.trials * 6 * 2);
  CHECK(p.ser == doctest::Approx(double(p.sym_err) / double(p.sym_den)));
  CHECK(p.ber == doctest::Approx(double(p.bit_err) / double(p.bit_den)));
  long long user_sum = 0;
  for (long long e : p.user_sym_err) user_sum += e;
  CHECK(user_sum == p.sym_err);
}

TEST_CASE("wilson intervals shrink like one over sqrt trials") {
  auto small = base_config();
  small.snr_db = {6.0};
  small.min_error_events = 1LL << 60;
  small.max_trials = 4096;
  auto big = small;
  big.max_trials = 4 * 4096;
  const auto rs = run_sweep(small);
  const auto rb = run_sweep(big);
  const double ratio = rs.points[0].ser_ci / rb.points[0].ser_ci;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);

  const auto w = wilson(0, 100);
  CHECK(w.lo == 0.0);
  CHECK(w.hi > 0.0);
  CHECK(wilson(0, 0).hi == 1.0);
}

TEST_CASE("ser decreases with snr") {
  auto cfg = base_config();
  cfg.snr_db = {6, 14};
  cfg.min_error_events = 1LL << 60;
  cfg.max_trials = 10000;
  for (const auto& name : {"4-LDS", "T4QAM"}) {
    cfg.system = SystemConfig::canonical(builtin(name));
    const auto r = run_sweep(cfg);
    CHECK(r.points[0].ser > r.points[1].ser);
  }
}

TEST_CASE("slope fit recovers a synthetic slope") {
  SweepResult r;
  for (double snr : {10.0, 15.0, 20.0, 25.0}) {
    SnrPointResult p;
    p.snr_db = snr;
    p.ser = std::pow(10.0, -snr / 5.0);  // exactly 5 dB per decade
    r.points.push_back(p);
  }
  CHECK(fit_slope_db_per_decade(r, 10, 25) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK_THROWS_AS(fit_slope_db_per_decade(r, 26, 30), Error);
}

TEST_CASE("compare orders results and flags ties") {
  auto cfg = base_config();
  cfg.snr_db = {10.0};
  cfg.min_error_events = 1LL << 60;
  cfg.max_trials = 8192;
  const auto a = run_sweep(cfg);
  cfg.seed = 43;
  const auto b = run_sweep(cfg);
  const auto cmp = compare({a, b}, {"seed42", "seed43"}, SweepMode::uncoded_symbol, 10.0);
  REQUIRE(cmp.ordered.size() == 2);
  // same distribution, different seeds: statistically indistinguishable
  CHECK(cmp.indistinguishable.size() == 1);

  CHECK_THROWS_AS(compare({a, b}, {"x", "y"}, SweepMode::uncoded_symbol, 11.0), Error);
}

TEST_CASE("configuration errors") {
  auto cfg = base_config();
  cfg.snr_db = {10, 10};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  cfg = base_config();
  cfg.channel = ChannelCase::ffic;  // coded case with an uncoded mode
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  cfg = base_config();
  cfg.mode = SweepMode::coded_frame;  // uncoded case with the coded mode
  CHECK_THROWS_AS(run_sweep(cfg), Error);
  cfg = base_config();
  cfg.min_error_events = 0;
  CHECK_THROWS_AS(run_sweep(cfg), Error);
}

TEST_CASE("experiment config round trip and strictness") {
  const std::string text = R"({
    "constellation": "4-LDS",
    "channel": "fic",
    "mode": "uncoded-symbol",
    "snr_db": [6, 10],
    "seed": 42,
    "min_error_events": 50,
    "max_trials": 20000,
    "mpa_iterations": 3
  })";
  const auto ec = ExperimentConfig::from_json_text(text);
  CHECK(ec.constellation == "4-LDS");
  const auto sc = ec.to_sweep(2);
  CHECK(sc.workers == 2);
  CHECK(sc.system.K == 6);
  CHECK(sc.mpa_iterations == 3);

  // round trip through the serialized form
  const auto ec2 = ExperimentConfig::from_json_text(ec.to_json_text());
  CHECK(ec2.snr_db == ec.snr_db);
  CHECK(ec2.seed == ec.seed);

  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"constellation":"4-LDS",
    "channel":"fic","snr_db":[1],"unknown_key":1})"),
                  Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"channel":"fic","snr_db":[1]})"),
                  Error);

  // auto iteration count: 3 for 4-point, 5 for 16-point
  const std::string auto16 = R"({
    "constellation": "16HQAM", "channel": "fic", "snr_db": [10]})";
  CHECK(ExperimentConfig::from_json_text(auto16).to_sweep(1).mpa_iterations == 5);

  // per-dimension rotation is applied to the resolved constellation
  const std::string rot = R"({
    "constellation": "4-LDS", "channel": "fic", "snr_db": [10],
    "rotation_phases": [1.5707963267948966, 0]})";
  const auto rsc = ExperimentConfig::from_json_text(rot).to_sweep(1);
  const auto base = builtin("4-LDS");
  const cplx got = rsc.system.constellation.points[0][0];
  const cplx want = base.points[0][0] * cplx{0, 1};
  CHECK(std::abs(got - want) < 1e-12);
}

TEST_CASE("coded sweep smoke") {
  SweepConfig cfg;
  cfg.system = SystemConfig::canonical(builtin("4-LDS"));
  cfg.channel = ChannelCase::ffic;
  cfg.mode = SweepMode::coded_frame;
  cfg.codec.type = "repetition";
  cfg.codec.n = 3;
  cfg.message_bits = 20;
  cfg.snr_db = {4.0};
  cfg.min_error_events = 20;
  cfg.max_trials = 2000;
  cfg.batch_size = 250;
  cfg.seed = 9;
  cfg.mpa_iterations = 3;
  const auto r = run_sweep(cfg);
  const auto& p = r.points[0];
  CHECK(p.frame_den == p.trials * 6);
  CHECK(p.bit_den == p.trials * 6 * 20);
  CHECK(p.fer > 0.0);
  CHECK(p.fer <= 1.0);
}
