#include "scmasim/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "scmasim/error.hpp"
#include "scmasim/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scmasim {

SweepMode sweep_mode_from_string(const std::string& s) {
  if (s == "uncoded-symbol") return SweepMode::uncoded_symbol;
  if (s == "uncoded-bit") return SweepMode::uncoded_bit;
  if (s == "coded-frame") return SweepMode::coded_frame;
  throw Error(Errc::unknown_name, "unknown mode: " + s);
}

std::string to_string(SweepMode m) {
  switch (m) {
    case SweepMode::uncoded_symbol: return "uncoded-symbol";
    case SweepMode::uncoded_bit: return "uncoded-bit";
    case SweepMode::coded_frame: return "coded-frame";
  }
  throw Error(Errc::invalid_config, "bad mode");
}

std::unique_ptr<Codec> CodecSpec::make() const {
  if (type == "identity") return make_identity_codec();
  if (type == "repetition") return make_repetition_codec(n);
  throw Error(Errc::config_error, "unknown codec type: " + type);
}

WilsonInterval wilson(long long errors, long long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(errors) / static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * static_cast<double>(n) * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

const SnrPointResult& SweepResult::at_snr(double snr_db) const {
  for (const auto& p : points)
    if (std::abs(p.snr_db - snr_db) < 1e-9) return p;
  throw Error(Errc::grid_mismatch, "snr point not in grid");
}

namespace {

struct Acc {
  long long sym = 0, bit = 0, frame = 0;
  std::vector<long long> us, ub, uf;

  explicit Acc(int K) : us(K, 0), ub(K, 0), uf(K, 0) {}
  void merge(const Acc& o) {
    sym += o.sym;
    bit += o.bit;
    frame += o.frame;
    for (size_t k = 0; k < us.size(); ++k) {
      us[k] += o.us[k];
      ub[k] += o.ub[k];
      uf[k] += o.uf[k];
    }
  }
};

void validate_sweep(const SweepConfig& cfg) {
  cfg.system.validate();
  for (size_t i = 1; i < cfg.snr_db.size(); ++i)
    if (!(cfg.snr_db[i] > cfg.snr_db[i - 1]))
      throw Error(Errc::config_error, "snr grid must be strictly increasing");
  if (cfg.min_error_events < 1)
    throw Error(Errc::config_error, "min_error_events must be >= 1");
  if (cfg.max_trials < 1) throw Error(Errc::config_error, "max_trials must be >= 1");
  if (cfg.batch_size < 1) throw Error(Errc::config_error, "batch_size must be >= 1");
  if (cfg.workers < 1) throw Error(Errc::config_error, "workers must be >= 1");
  if (cfg.mpa_iterations < 1)
    throw Error(Errc::config_error, "mpa_iterations must be >= 1");
  const bool coded = cfg.mode == SweepMode::coded_frame;
  if (coded) {
    if (cfg.message_bits < 1)
      throw Error(Errc::config_error, "message_bits must be >= 1");
    if (!is_coded_case(cfg.channel) && cfg.channel != ChannelCase::awgn)
      throw Error(Errc::config_error,
                  "coded-frame mode needs ffsc/ffic/sfsc/sfic/awgn");
  } else {
    if (is_coded_case(cfg.channel) && cfg.channel != ChannelCase::fsc &&
        cfg.channel != ChannelCase::fic)
      throw Error(Errc::config_error,
                  "uncoded modes use single-shot cases fsc/fic/awgn");
  }
}

long long stop_events(const SnrPointResult& pt, SweepMode mode) {
  switch (mode) {
    case SweepMode::uncoded_symbol: return pt.sym_err;
    case SweepMode::uncoded_bit: return pt.bit_err;
    case SweepMode::coded_frame: return pt.frame_err;
  }
  return 0;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  validate_sweep(cfg);
  SweepResult out;
  const auto& c = cfg.system.constellation;
  const int K = cfg.system.K;
  const int N = cfg.system.N;
  const int M = c.M;
  const int bits = c.bits_per_symbol();
  const bool coded = cfg.mode == SweepMode::coded_frame;

  std::vector<int> label2point(M);
  for (int m = 0; m < M; ++m) label2point[c.labels[m]] = m;

  const Detector det(cfg.system,
                     DetectorOptions{cfg.mpa_iterations, cfg.collapse, false});

  std::unique_ptr<Codec> codec;
  FramePlan plan;
  int k_c = 0;
  if (coded) {
    codec = cfg.codec.make();
    k_c = cfg.message_bits;
    const double nc_real = k_c / codec->rate();
    const int n_c = static_cast<int>(std::lround(nc_real));
    if (std::abs(nc_real - n_c) > 1e-9)
      throw Error(Errc::config_error, "K_c / R is not integral");
    if (n_c % bits != 0)
      throw Error(Errc::config_error, "log2(M) must divide N_c");
    plan = FramePlan::seeded(n_c, bits, cfg.seed);
  }

  for (size_t snr_idx = 0; snr_idx < cfg.snr_db.size(); ++snr_idx) {
    const double snr = cfg.snr_db[snr_idx];
    const double n0 = n0_from_snr(snr, bits, coded ? codec->rate() : 1.0);
    const auto t_start = std::chrono::steady_clock::now();

    SnrPointResult pt;
    pt.snr_db = snr;
    pt.user_sym_err.assign(K, 0);
    pt.user_bit_err.assign(K, 0);
    pt.user_frame_err.assign(K, 0);

    auto run_one = [&](long long t, Acc& acc, Detector::Workspace& ws,
                       DetectionResult& res, std::vector<cplx>& y,
                       std::vector<cplx>& h, std::vector<int>& tx) {
      const uint64_t ts =
          rng::derive_seed(cfg.seed, static_cast<uint32_t>(snr_idx),
                           static_cast<uint64_t>(t));
      if (coded) {
        const FrameOutcome fo =
            run_coded_frame(*codec, plan, cfg.system, cfg.channel, snr,
                            cfg.mpa_iterations, cfg.collapse, ts);
        for (int k = 0; k < K; ++k) {
          acc.bit += fo.bit_errors[k];
          acc.ub[k] += fo.bit_errors[k];
          acc.frame += fo.frame_error[k];
          acc.uf[k] += fo.frame_error[k];
        }
        return;
      }
      for (int k = 0; k < K; ++k) {
        const uint32_t lab =
            static_cast<uint32_t>(rng::u64(ts, rng::kData, k, 0, 0)) & (M - 1);
        tx[k] = label2point[lab];
      }
      for (int k = 0; k < K; ++k)
        for (int n = 0; n < N; ++n)
          h[static_cast<size_t>(k) * N + n] =
              detail::channel_coeff(cfg.channel, k, n, 0, ts);
      const double s = std::sqrt(n0);
      for (int n = 0; n < N; ++n)
        y[n] = s * rng::cn01(ts, rng::kNoise, n, 0, 0);
      for (int k = 0; k < K; ++k) {
        const auto& f = cfg.system.maps[k];
        const auto& p = c.points[tx[k]];
        for (int j = 0; j < f.dv(); ++j) {
          const int n = f.rows[j];
          y[n] += h[static_cast<size_t>(k) * N + n] * p[j];
        }
      }
      det.detect_into(y, h, n0, ws, res);
      for (int k = 0; k < K; ++k) {
        if (res.hard_symbols[k] != tx[k]) {
          ++acc.sym;
          ++acc.us[k];
        }
        const int be =
            std::popcount(c.labels[res.hard_symbols[k]] ^ c.labels[tx[k]]);
        acc.bit += be;
        acc.ub[k] += be;
      }
    };

    while (pt.trials < cfg.max_trials &&
           stop_events(pt, cfg.mode) < cfg.min_error_events) {
      const long long begin = pt.trials;
      const long long end = std::min(begin + cfg.batch_size, cfg.max_trials);
      Acc total(K);

      if (cfg.workers == 1) {
        // serial reference path
        Acc acc(K);
        auto ws = det.make_workspace();
        DetectionResult res;
        std::vector<cplx> y(N), h(static_cast<size_t>(K) * N);
        std::vector<int> tx(K);
        for (long long t = begin; t < end; ++t) run_one(t, acc, ws, res, y, h, tx);
        total.merge(acc);
      } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(cfg.workers)
        {
          Acc acc(K);
          auto ws = det.make_workspace();
          DetectionResult res;
          std::vector<cplx> y(N), h(static_cast<size_t>(K) * N);
          std::vector<int> tx(K);
#pragma omp for schedule(static)
          for (long long t = begin; t < end; ++t) run_one(t, acc, ws, res, y, h, tx);
#pragma omp critical
          total.merge(acc);
        }
#else
        Acc acc(K);
        auto ws = det.make_workspace();
        DetectionResult res;
        std::vector<cplx> y(N), h(static_cast<size_t>(K) * N);
        std::vector<int> tx(K);
        for (long long t = begin; t < end; ++t) run_one(t, acc, ws, res, y, h, tx);
        total.merge(acc);
#endif
      }
      pt.trials = end;
      pt.sym_err += total.sym;
      pt.bit_err += total.bit;
      pt.frame_err += total.frame;
      for (int k = 0; k < K; ++k) {
        pt.user_sym_err[k] += total.us[k];
        pt.user_bit_err[k] += total.ub[k];
        pt.user_frame_err[k] += total.uf[k];
      }
    }

    pt.sym_den = coded ? 0 : pt.trials * K;
    pt.bit_den = coded ? pt.trials * K * k_c : pt.trials * K * bits;
    pt.frame_den = coded ? pt.trials * K : 0;
    auto rate = [](long long e, long long d) {
      return d > 0 ? static_cast<double>(e) / static_cast<double>(d) : 0.0;
    };
    pt.ser = rate(pt.sym_err, pt.sym_den);
    pt.ber = rate(pt.bit_err, pt.bit_den);
    pt.fer = rate(pt.frame_err, pt.frame_den);
    pt.ser_ci = pt.sym_den ? wilson(pt.sym_err, pt.sym_den).half_width() : 0.0;
    pt.ber_ci = pt.bit_den ? wilson(pt.bit_err, pt.bit_den).half_width() : 0.0;
    pt.fer_ci = pt.frame_den ? wilson(pt.frame_err, pt.frame_den).half_width() : 0.0;
    pt.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    if (cfg.progress) cfg.progress(pt);
    out.points.push_back(std::move(pt));
  }
  return out;
}

double fit_slope_db_per_decade(const SweepResult& r, double snr_lo, double snr_hi,
                               SweepMode metric) {
  std::vector<double> xs, ys;
  for (const auto& p : r.points) {
    if (p.snr_db < snr_lo - 1e-9 || p.snr_db > snr_hi + 1e-9) continue;
    const double rate = metric == SweepMode::uncoded_symbol ? p.ser
                        : metric == SweepMode::uncoded_bit  ? p.ber
                                                            : p.fer;
    if (rate <= 0) continue;
    xs.push_back(p.snr_db);
    ys.push_back(std::log10(rate));
  }
  if (xs.size() < 2)
    throw Error(Errc::invalid_config, "slope fit needs >= 2 nonzero points in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);  // log10 per dB
  if (slope >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / slope;  // dB per decade of rate
}

Comparison compare(const std::vector<SweepResult>& results,
                   const std::vector<std::string>& names, SweepMode metric,
                   double snr_db) {
  if (results.size() != names.size())
    throw Error(Errc::invalid_config, "one name per result required");
  Comparison cmp;
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& p = results[i].at_snr(snr_db);
    ComparisonRow row;
    row.index = static_cast<int>(i);
    row.name = names[i];
    switch (metric) {
      case SweepMode::uncoded_symbol: row.rate = p.ser; row.ci_half = p.ser_ci; break;
      case SweepMode::uncoded_bit: row.rate = p.ber; row.ci_half = p.ber_ci; break;
      case SweepMode::coded_frame: row.rate = p.fer; row.ci_half = p.fer_ci; break;
    }
    cmp.ordered.push_back(row);
  }
  std::stable_sort(cmp.ordered.begin(), cmp.ordered.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     return a.rate < b.rate;
                   });
  for (size_t i = 0; i < cmp.ordered.size(); ++i)
    for (size_t j = i + 1; j < cmp.ordered.size(); ++j) {
      const auto& a = cmp.ordered[i];
      const auto& b = cmp.ordered[j];
      if (std::abs(a.rate - b.rate) <= a.ci_half + b.ci_half)
        cmp.indistinguishable.emplace_back(a.index, b.index);
    }
  return cmp;
}

namespace {
std::string g10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

void write_csv(const SweepResult& r, std::ostream& os) {
  os << "snr_db,trials,sym_err,bit_err,frame_err,ser,ber,fer,ser_ci,ber_ci,fer_ci\n";
  for (const auto& p : r.points) {
    os << g10(p.snr_db) << "," << p.trials << "," << p.sym_err << "," << p.bit_err
       << "," << p.frame_err << "," << g10(p.ser) << "," << g10(p.ber) << ","
       << g10(p.fer) << "," << g10(p.ser_ci) << "," << g10(p.ber_ci) << ","
       << g10(p.fer_ci) << "\n";
  }
}

std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  write_csv(r, os);
  return os.str();
}

void write_json(const SweepResult& r, const std::string& config_json,
                std::ostream& os) {
  nlohmann::json j;
  try {
    j["config"] = nlohmann::json::parse(config_json);
  } catch (const std::exception& e) {
    throw Error(Errc::parse_error, std::string("config echo: ") + e.what());
  }
  j["results"] = nlohmann::json::array();
  for (const auto& p : r.points) {
    nlohmann::json row;
    row["snr_db"] = p.snr_db;
    row["trials"] = p.trials;
    row["sym_err"] = p.sym_err;
    row["bit_err"] = p.bit_err;
    row["frame_err"] = p.frame_err;
    row["ser"] = p.ser;
    row["ber"] = p.ber;
    row["fer"] = p.fer;
    row["ser_ci"] = p.ser_ci;
    row["ber_ci"] = p.ber_ci;
    row["fer_ci"] = p.fer_ci;
    row["per_user_sym_err"] = p.user_sym_err;
    row["per_user_bit_err"] = p.user_bit_err;
    row["per_user_frame_err"] = p.user_frame_err;
    j["results"].push_back(row);
  }
  os << j.dump(1) << "\n";
}

}  // namespace scmasim
