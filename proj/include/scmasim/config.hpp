#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scmasim/harness.hpp"

namespace scmasim {

/// Experiment description as carried by config files. Schema is strict:
/// unknown keys are rejected. The multiple-access layout is the canonical
/// fully loaded K=6, N=4, dv=2, dc=3 system.
struct ExperimentConfig {
  std::string constellation;  // builtin name or path to a constellation file
  std::string channel;
  std::string mode = "uncoded-symbol";
  CodecSpec codec;
  std::vector<double> snr_db;
  uint64_t seed = 1;
  long long min_error_events = 200;
  long long max_trials = 10'000'000;
  int mpa_iterations = 0;  // 0 = auto: 3 for 4-point, 5 for 16-point
  int message_bits = 40;
  long long batch_size = 4096;
  bool collapse = true;
  std::vector<double> rotation_phases;  // radians per dimension; empty = none

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_json_text() const;

  /// Resolve the constellation, apply any rotation, and build a SweepConfig.
  SweepConfig to_sweep(int workers) const;
};

/// Builtin name, else a file path (loaded and energy-normalized).
MultiDimConstellation resolve_constellation(const std::string& name_or_path);

}  // namespace scmasim
