#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scmasim/bicm.hpp"
#include "scmasim/channel.hpp"
#include "scmasim/detector.hpp"

namespace scmasim {

enum class SweepMode { uncoded_symbol, uncoded_bit, coded_frame };

SweepMode sweep_mode_from_string(const std::string& s);
std::string to_string(SweepMode m);

struct CodecSpec {
  std::string type = "identity";  // "identity" or "repetition"
  int n = 3;

  std::unique_ptr<Codec> make() const;
};

struct SweepConfig {
  SystemConfig system;
  ChannelCase channel = ChannelCase::fic;
  SweepMode mode = SweepMode::uncoded_symbol;
  CodecSpec codec;
  std::vector<double> snr_db;  // strictly increasing
  long long min_error_events = 200;
  long long max_trials = 10'000'000;
  uint64_t seed = 1;
  int workers = 1;
  int mpa_iterations = 3;
  bool collapse = true;
  int message_bits = 40;         // coded mode: K_c per user
  long long batch_size = 4096;   // stopping rule evaluated at batch boundaries

  /// Called after each grid point completes (progress reporting; not part of
  /// the result and has no effect on it).
  std::function<void(const struct SnrPointResult&)> progress;
};

struct SnrPointResult {
  double snr_db = 0;
  long long trials = 0;  // trials (uncoded) or frames (coded)
  long long sym_err = 0, bit_err = 0, frame_err = 0;
  long long sym_den = 0, bit_den = 0, frame_den = 0;
  double ser = 0, ber = 0, fer = 0;
  double ser_ci = 0, ber_ci = 0, fer_ci = 0;  // Wilson 95% half-widths
  std::vector<long long> user_sym_err, user_bit_err, user_frame_err;
  double wall_seconds = 0;  // informational only; never written to files
};

struct SweepResult {
  std::vector<SnrPointResult> points;

  const SnrPointResult& at_snr(double snr_db) const;  // Errc::grid_mismatch
};

/// Seeded Monte Carlo sweep. Per-trial seeds are derived from (seed, snr
/// index, trial index), the stopping rule is evaluated at batch boundaries,
/// and counts are integers, so the result is identical for any worker count.
SweepResult run_sweep(const SweepConfig& cfg);

struct WilsonInterval {
  double lo = 0, hi = 0;
  double half_width() const { return (hi - lo) / 2; }
};
WilsonInterval wilson(long long errors, long long n, double z = 1.96);

/// Least-squares slope of log10(rate) vs snr, reported as dB per decade,
/// over grid points with snr in [snr_lo, snr_hi] and nonzero rate.
double fit_slope_db_per_decade(const SweepResult& r, double snr_lo, double snr_hi,
                               SweepMode metric = SweepMode::uncoded_symbol);

struct ComparisonRow {
  int index = 0;  // position in the input list
  std::string name;
  double rate = 0, ci_half = 0;
};
struct Comparison {
  std::vector<ComparisonRow> ordered;                    // best (lowest rate) first
  std::vector<std::pair<int, int>> indistinguishable;    // overlapping 95% CIs
};
Comparison compare(const std::vector<SweepResult>& results,
                   const std::vector<std::string>& names, SweepMode metric,
                   double snr_db);

/// snr_db,trials,sym_err,bit_err,frame_err,ser,ber,fer,ser_ci,ber_ci,fer_ci
void write_csv(const SweepResult& r, std::ostream& os);
std::string to_csv(const SweepResult& r);

/// JSON mirror of the CSV rows with the experiment config embedded verbatim.
void write_json(const SweepResult& r, const std::string& config_json, std::ostream& os);

}  // namespace scmasim
