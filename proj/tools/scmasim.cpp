// Command-line front end: constellation KPIs, Monte Carlo sweeps, the
// detector-vs-exhaustive-MAP check, and the constellation catalog.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scmasim/config.hpp"
#include "scmasim/error.hpp"
#include "scmasim/kpi.hpp"
#include "scmasim/rng.hpp"

namespace fs = std::filesystem;
using namespace scmasim;

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::config_error:
    case Errc::io_error:
    case Errc::unknown_name:
    case Errc::invariant_violation:
    case Errc::unsupported_size:
    case Errc::too_large:
      return 2;
    default:
      return 3;
  }
}

void print_report(const MultiDimConstellation& c) {
  const KpiReport r = report(c);
  std::cout << "constellation: " << c.name << " (M=" << c.M << ", dv=" << c.dv
            << ")\n";
  std::cout << "  d2_e_min: " << r.d2_e_min << "\n";
  std::cout << "  tau_e:    " << r.tau_e << "\n";
  std::cout << "  d2_p_min: " << r.d2_p_min << "\n";
  std::cout << "  tau_p:    " << r.tau_p << "\n";
  std::cout << "  L:        " << r.L << "\n";
  std::cout << "  Nd:       " << r.Nd << "\n";
  std::cout << "  gray:     " << (r.gray ? "yes" : "no") << "\n";
}

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> names;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) names.push_back(item);
  return names;
}

int cmd_kpi(const std::string& constellation, const std::string& table, bool csv) {
  if (!table.empty()) {
    std::vector<MultiDimConstellation> cs;
    for (const auto& n : split_names(table)) cs.push_back(resolve_constellation(n));
    std::cout << table_csv(cs);
    return 0;
  }
  const MultiDimConstellation c = resolve_constellation(constellation);
  if (csv)
    std::cout << table_csv({c});
  else
    print_report(c);
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 int workers) {
  const ExperimentConfig ec = ExperimentConfig::from_file(config_path);
  SweepConfig sc = ec.to_sweep(workers);
  sc.progress = [](const SnrPointResult& p) {
    std::cerr << "snr_db=" << p.snr_db << " trials=" << p.trials
              << " ser=" << p.ser << " ber=" << p.ber << " fer=" << p.fer
              << " (" << p.wall_seconds << " s)\n";
  };
  const SweepResult r = run_sweep(sc);

  std::ofstream csv(out_path);
  if (!csv) throw Error(Errc::io_error, "cannot open " + out_path);
  write_csv(r, csv);
  if (!csv) throw Error(Errc::io_error, "write failed: " + out_path);

  fs::path jp(out_path);
  if (jp.extension() == ".csv")
    jp.replace_extension(".json");
  else
    jp += ".json";
  std::ofstream js(jp);
  if (!js) throw Error(Errc::io_error, "cannot open " + jp.string());
  write_json(r, ec.to_json_text(), js);
  std::cerr << "wrote " << out_path << " and " << jp.string() << "\n";
  return 0;
}

int cmd_oracle_check(const std::string& config_path, long long trials,
                     double threshold, int workers) {
  (void)workers;  // the check is cheap; kept single-threaded
  const ExperimentConfig ec = ExperimentConfig::from_file(config_path);
  SweepConfig sc = ec.to_sweep(1);
  if (sc.snr_db.empty())
    throw Error(Errc::config_error, "oracle-check needs one snr point");
  const auto& sys = sc.system;
  const int K = sys.K, N = sys.N, M = sys.M();
  double hyp = 1;
  for (int k = 0; k < K; ++k) hyp *= M;
  if (hyp > static_cast<double>(1 << 20))
    throw Error(Errc::too_large, "M^K exceeds the joint-MAP guard");

  const double snr = sc.snr_db.front();
  const int bits = sys.constellation.bits_per_symbol();
  const double n0 = n0_from_snr(snr, bits, 1.0);
  std::vector<int> label2point(M);
  for (int m = 0; m < M; ++m) label2point[sys.constellation.labels[m]] = m;

  Detector det(sys, DetectorOptions{sc.mpa_iterations, sc.collapse, false});
  auto ws = det.make_workspace();
  DetectionResult res;
  std::vector<cplx> y(N), h(static_cast<size_t>(K) * N);

  long long agree = 0, total = 0;
  for (long long t = 0; t < trials; ++t) {
    const uint64_t ts = rng::derive_seed(sc.seed, 0, static_cast<uint64_t>(t));
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < N; ++n)
        h[static_cast<size_t>(k) * N + n] =
            detail::channel_coeff(sc.channel, k, n, 0, ts);
    const double s = std::sqrt(n0);
    for (int n = 0; n < N; ++n) y[n] = s * rng::cn01(ts, rng::kNoise, n, 0, 0);
    for (int k = 0; k < K; ++k) {
      const uint32_t lab =
          static_cast<uint32_t>(rng::u64(ts, rng::kData, k, 0, 0)) & (M - 1);
      const auto& p = sys.constellation.points[label2point[lab]];
      const auto& f = sys.maps[k];
      for (int j = 0; j < f.dv(); ++j)
        y[f.rows[j]] += h[static_cast<size_t>(k) * N + f.rows[j]] * p[j];
    }
    det.detect_into(y, h, n0, ws, res);
    const JointMapResult jm = joint_map(y, h, sys, n0);
    for (int k = 0; k < K; ++k) {
      ++total;
      if (res.hard_symbols[k] == jm.maxlog_hard[k]) ++agree;
    }
  }
  const double frac = total ? static_cast<double>(agree) / total : 0.0;
  std::cout << "agreement: " << frac * 100.0 << "% (" << agree << "/" << total
            << ") over " << trials << " trials at " << snr << " dB\n";
  return frac >= threshold ? 0 : 1;
}

int cmd_catalog_list(const std::string& data_dir) {
  for (const auto& n : builtin_names()) {
    const auto c = builtin(n);
    std::cout << n << "  builtin  M=" << c.M << " dv=" << c.dv << "\n";
  }
  if (fs::is_directory(data_dir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(data_dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      try {
        const auto c = load_constellation(p.string());
        std::cout << c.name << "  file " << p.string() << "  M=" << c.M
                  << " dv=" << c.dv << "\n";
      } catch (const Error& e) {
        std::cerr << p.string() << ": " << e.what() << "\n";
      }
    }
  }
  return 0;
}

int cmd_catalog_export(const std::string& name, const std::string& out) {
  save_constellation(resolve_constellation(name), out);
  std::cerr << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplink SCMA link-level simulator and constellation toolkit"};
  app.require_subcommand(1);

  auto* kpi = app.add_subcommand("kpi", "Print the KPI report of a constellation");
  std::string kpi_constellation, kpi_table;
  bool kpi_csv = false;
  kpi->add_option("--constellation", kpi_constellation, "builtin name or file path");
  kpi->add_option("--table", kpi_table, "comma-separated names/paths for a CSV table");
  kpi->add_flag("--csv", kpi_csv, "emit CSV");

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo sweep from a config");
  std::string sim_config, sim_out;
  int sim_workers = 1;
  sim->add_option("--config", sim_config, "experiment config JSON")->required();
  sim->add_option("--out", sim_out, "output CSV path (JSON mirror written beside it)")
      ->required();
  sim->add_option("--workers", sim_workers, "worker threads (identical output for any count)");

  auto* ora = app.add_subcommand("oracle-check",
                                 "Compare detector hard decisions with exhaustive max-log MAP");
  std::string ora_config;
  long long ora_trials = 10000;
  double ora_threshold = 0.99;
  int ora_workers = 1;
  ora->add_option("--config", ora_config, "experiment config JSON")->required();
  ora->add_option("--trials", ora_trials, "number of trials");
  ora->add_option("--threshold", ora_threshold, "minimum agreement fraction");
  ora->add_option("--workers", ora_workers, "accepted for symmetry; check is single-threaded");

  auto* cat = app.add_subcommand("catalog", "List or export constellations");
  auto* cat_list = cat->add_subcommand("list", "List builtins and bundled files");
  std::string cat_dir = "data";
  cat_list->add_option("--data-dir", cat_dir, "directory of bundled constellation files");
  auto* cat_export = cat->add_subcommand("export", "Write a constellation to a file");
  std::string cat_name, cat_out;
  cat_export->add_option("--name", cat_name, "builtin name or file path")->required();
  cat_export->add_option("--out", cat_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*kpi) {
      if (kpi_constellation.empty() && kpi_table.empty()) {
        std::cerr << "kpi: --constellation or --table required\n";
        return 2;
      }
      return cmd_kpi(kpi_constellation, kpi_table, kpi_csv);
    }
    if (*sim) return cmd_simulate(sim_config, sim_out, sim_workers);
    if (*ora) return cmd_oracle_check(ora_config, ora_trials, ora_threshold, ora_workers);
    if (*cat) {
      if (*cat_list) return cmd_catalog_list(cat_dir);
      if (*cat_export) return cmd_catalog_export(cat_name, cat_out);
      std::cerr << "catalog: use 'list' or 'export'\n";
      return 2;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
