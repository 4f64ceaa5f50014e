#include "scmasim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "scmasim/error.hpp"

namespace scmasim {

MultiDimConstellation resolve_constellation(const std::string& name_or_path) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin(name_or_path);
  return normalize_energy(load_constellation(name_or_path));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Errc::parse_error, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::config_error, "config must be a JSON object");

  static const std::set<std::string> known = {
      "constellation", "channel",        "mode",       "codec",
      "snr_db",        "seed",           "min_error_events", "max_trials",
      "mpa_iterations", "message_bits",  "batch_size", "collapse",
      "rotation_phases"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw Error(Errc::config_error, "unknown config key: " + it.key());

  ExperimentConfig c;
  try {
    c.constellation = j.at("constellation").get<std::string>();
    c.channel = j.at("channel").get<std::string>();
    channel_case_from_string(c.channel);  // validate early
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    sweep_mode_from_string(c.mode);
    if (j.contains("codec")) {
      const auto& jc = j["codec"];
      if (!jc.is_object() || !jc.contains("type"))
        throw Error(Errc::config_error, "codec must be an object with a type");
      for (auto it = jc.begin(); it != jc.end(); ++it)
        if (it.key() != "type" && it.key() != "n")
          throw Error(Errc::config_error, "unknown codec key: " + it.key());
      c.codec.type = jc["type"].get<std::string>();
      if (jc.contains("n")) c.codec.n = jc["n"].get<int>();
    }
    c.snr_db = j.at("snr_db").get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
    if (j.contains("min_error_events"))
      c.min_error_events = j["min_error_events"].get<long long>();
    if (j.contains("max_trials")) c.max_trials = j["max_trials"].get<long long>();
    if (j.contains("mpa_iterations")) c.mpa_iterations = j["mpa_iterations"].get<int>();
    if (j.contains("message_bits")) c.message_bits = j["message_bits"].get<int>();
    if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<long long>();
    if (j.contains("collapse")) c.collapse = j["collapse"].get<bool>();
    if (j.contains("rotation_phases"))
      c.rotation_phases = j["rotation_phases"].get<std::vector<double>>();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(Errc::config_error, std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json j;
  j["constellation"] = constellation;
  j["channel"] = channel;
  j["mode"] = mode;
  j["codec"] = {{"type", codec.type}, {"n", codec.n}};
  j["snr_db"] = snr_db;
  j["seed"] = seed;
  j["min_error_events"] = min_error_events;
  j["max_trials"] = max_trials;
  j["mpa_iterations"] = mpa_iterations;
  j["message_bits"] = message_bits;
  j["batch_size"] = batch_size;
  j["collapse"] = collapse;
  j["rotation_phases"] = rotation_phases;
  return j.dump(1);
}

SweepConfig ExperimentConfig::to_sweep(int workers) const {
  MultiDimConstellation c = resolve_constellation(constellation);
  if (!rotation_phases.empty()) {
    std::vector<cplx> phases;
    for (double t : rotation_phases) phases.push_back(std::polar(1.0, t));
    c = apply_rotation(c, phases);
  }
  SweepConfig s;
  s.mpa_iterations = mpa_iterations > 0 ? mpa_iterations : (c.M <= 4 ? 3 : 5);
  s.system = SystemConfig::canonical(std::move(c));
  s.channel = channel_case_from_string(channel);
  s.mode = sweep_mode_from_string(mode);
  s.codec = codec;
  s.snr_db = snr_db;
  s.min_error_events = min_error_events;
  s.max_trials = max_trials;
  s.seed = seed;
  s.workers = workers;
  s.collapse = collapse;
  s.message_bits = message_bits;
  s.batch_size = batch_size;
  return s;
}

}  // namespace scmasim
