#pragma once

// Monte Carlo orchestration: outage-probability curves, decode-constraint
// probability curves and finite-SNR diversity estimates, with Wilson score
// confidence intervals and deterministic parallelism. Every trial is a pure
// function of (master seed, trial index), so outage counts do not depend on
// the worker count or scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/csv.hpp"
#include "relaysim/dblast.hpp"
#include "relaysim/mimo_info.hpp"

namespace relaysim {

enum class Scheme { direct, successive_ml, dblast, stc, mimo22 };
enum class RateMode { fixed_rate, multiplexing };
enum class RelayMode { perfect, constrained };
enum class Task { outage, constraint };

inline std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::direct: return "direct";
    case Scheme::successive_ml: return "successive_ml";
    case Scheme::dblast: return "dblast";
    case Scheme::stc: return "stc";
    case Scheme::mimo22: return "mimo22";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

inline bool scheme_uses_relay(Scheme s) {
  return s == Scheme::successive_ml || s == Scheme::dblast || s == Scheme::stc;
}

struct SimConfig {
  std::vector<SnrPoint> snr_grid;
  int frame_length = 20;  // L
  std::uint64_t trials = 100000;
  std::uint64_t master_seed = 1;
  Scheme scheme = Scheme::successive_ml;
  Geometry geometry{};
  RateMode rate_mode = RateMode::multiplexing;
  double rate_value = 1.0;  // R in bits/slot (fixed_rate) or r (multiplexing)
  double array_gain = 1.0;  // g in R = r log2(1 + g eta)
  RelayMode relay_mode = RelayMode::perfect;
  Task task = Task::outage;
  std::size_t workers = 0;  // 0 = hardware concurrency

  // Target spectral efficiency in bits/slot at a given SNR point.
  double rate_bits_per_slot(const SnrPoint& snr) const {
    if (rate_mode == RateMode::fixed_rate) return rate_value;
    return rate_value * std::log2(1.0 + array_gain * snr.eta);
  }

  void validate() const {
    if (snr_grid.empty())
      throw std::invalid_argument("SimConfig: SNR grid must be nonempty");
    for (std::size_t i = 1; i < snr_grid.size(); ++i)
      if (!(snr_grid[i].eta > snr_grid[i - 1].eta))
        throw std::invalid_argument("SimConfig: SNR grid must be strictly increasing");
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
    if (frame_length < 1) throw std::invalid_argument("SimConfig: L must be >= 1");
    if (rate_value < 0.0)
      throw std::invalid_argument("SimConfig: rate value must be nonnegative");
    if (array_gain <= 0.0)
      throw std::invalid_argument("SimConfig: array gain must be positive");
    if (!(geometry.rtilde > 0.0) || !(geometry.pathloss_exponent > 0.0))
      throw std::invalid_argument("SimConfig: invalid geometry");
    if (task == Task::constraint && !scheme_uses_relay(scheme))
      throw std::invalid_argument(
          "SimConfig: constraint curves require a relaying scheme");
    if (relay_mode == RelayMode::constrained && !scheme_uses_relay(scheme))
      throw std::invalid_argument(
          "SimConfig: constrained relay mode requires a relaying scheme");
  }
};

struct ConfidenceInterval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval; stays sensible in the deep-outage tail where the
// normal approximation collapses.
inline ConfidenceInterval wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials,
                                          double z = 1.959963984540054) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  ConfidenceInterval ci;
  ci.low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  ci.high = successes == trials ? 1.0 : std::min(1.0, center + half);
  return ci;
}

struct CurvePoint {
  double snr_db = 0.0;
  double eta = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t outage_count = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct OutageCurve {
  std::vector<CurvePoint> points;
};

namespace detail {

// Per-trial event flags across the whole SNR grid. Realizations, transfer
// matrices and constraint thresholds are computed once per trial; only the
// per-SNR Cholesky (and rate target) varies along the sweep. The flags are
// identical to evaluating the per-operation events point by point.
inline void evaluate_trial(const SimConfig& cfg, std::uint64_t trial,
                           std::vector<std::uint8_t>& flags) {
  RandomStream stream(cfg.master_seed, trial);
  const ChannelRealization ch = sample_realization(stream, cfg.geometry);
  const std::size_t npoints = cfg.snr_grid.size();
  flags.assign(npoints, 0);

  if (cfg.task == Task::constraint) {
    const double threshold = cfg.scheme == Scheme::stc
                                 ? constraint_threshold_stc(ch)
                                 : constraint_threshold_successive(ch);
    for (std::size_t i = 0; i < npoints; ++i)
      flags[i] = threshold >= cfg.snr_grid[i].eta ? 1 : 0;
    return;
  }

  double constraint_threshold = 0.0;
  if (cfg.relay_mode == RelayMode::constrained)
    constraint_threshold = cfg.scheme == Scheme::stc
                               ? constraint_threshold_stc(ch)
                               : constraint_threshold_successive(ch);

  switch (cfg.scheme) {
    case Scheme::direct: {
      for (std::size_t i = 0; i < npoints; ++i) {
        const SnrPoint& snr = cfg.snr_grid[i];
        flags[i] = direct_outage_event(ch, snr, cfg.rate_bits_per_slot(snr)) ? 1 : 0;
      }
      break;
    }
    case Scheme::mimo22: {
      ComplexMatrix h22(2, 2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) h22(i, j) = ch.h_rd[i][j];
      const MutualInformation mi(h22);
      for (std::size_t i = 0; i < npoints; ++i) {
        const SnrPoint& snr = cfg.snr_grid[i];
        flags[i] = mi.bits(snr) < cfg.rate_bits_per_slot(snr) ? 1 : 0;
      }
      break;
    }
    case Scheme::stc: {
      const MutualInformation mi(assemble_stc_matrix(ch));
      for (std::size_t i = 0; i < npoints; ++i) {
        const SnrPoint& snr = cfg.snr_grid[i];
        flags[i] = mi.bits(snr) < 2.0 * cfg.rate_bits_per_slot(snr) ? 1 : 0;
      }
      break;
    }
    case Scheme::successive_ml: {
      const FrameSpec frame(cfg.frame_length);
      const MutualInformation mi(assemble_successive_matrix(ch, frame));
      for (std::size_t i = 0; i < npoints; ++i) {
        const SnrPoint& snr = cfg.snr_grid[i];
        flags[i] =
            mi.bits(snr) < cfg.rate_bits_per_slot(snr) * frame.slots() ? 1 : 0;
      }
      break;
    }
    case Scheme::dblast: {
      const FrameSpec frame(cfg.frame_length);
      const ComplexMatrix h = assemble_successive_matrix(ch, frame);
      const LayerSchedule schedule = layer_schedule(frame.codewords);
      for (std::size_t i = 0; i < npoints; ++i) {
        const SnrPoint& snr = cfg.snr_grid[i];
        const double per_message_bits =
            cfg.rate_bits_per_slot(snr) * frame.slots() / frame.codewords;
        const LayerRates rates = mmse_sic_layer_rates(h, snr, schedule);
        std::uint8_t out = 0;
        for (double rate : rates.bits)
          if (rate < per_message_bits) {
            out = 1;
            break;
          }
        flags[i] = out;
      }
      break;
    }
  }

  if (cfg.relay_mode == RelayMode::constrained && scheme_uses_relay(cfg.scheme))
    for (std::size_t i = 0; i < npoints; ++i)
      if (constraint_threshold < cfg.snr_grid[i].eta) flags[i] = 1;
}

inline std::vector<std::uint64_t> accumulate_counts(const SimConfig& cfg) {
  const std::size_t npoints = cfg.snr_grid.size();
  std::size_t nworkers = cfg.workers != 0
                             ? cfg.workers
                             : std::max(1u, std::thread::hardware_concurrency());
  nworkers = std::min<std::size_t>(nworkers, cfg.trials);

  std::vector<std::vector<std::uint64_t>> worker_counts(
      nworkers, std::vector<std::uint64_t>(npoints, 0));
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string error_message;

  const std::uint64_t chunk = (cfg.trials + nworkers - 1) / nworkers;
  auto work = [&](std::size_t w) {
    std::vector<std::uint8_t> flags;
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(cfg.trials, begin + chunk);
    for (std::uint64_t t = begin; t < end && !failed.load(); ++t) {
      try {
        evaluate_trial(cfg, t, flags);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error_message.empty())
          error_message = "trial " + std::to_string(t) + ": " + e.what();
        failed.store(true);
        return;
      }
      for (std::size_t i = 0; i < npoints; ++i) worker_counts[w][i] += flags[i];
    }
  };

  if (nworkers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  std::vector<std::uint64_t> totals(npoints, 0);
  for (const auto& counts : worker_counts)
    for (std::size_t i = 0; i < npoints; ++i) totals[i] += counts[i];
  return totals;
}

inline OutageCurve curve_from_counts(const SimConfig& cfg,
                                     const std::vector<std::uint64_t>& counts) {
  OutageCurve curve;
  curve.points.reserve(cfg.snr_grid.size());
  for (std::size_t i = 0; i < cfg.snr_grid.size(); ++i) {
    CurvePoint pt;
    pt.snr_db = cfg.snr_grid[i].eta_db();
    pt.eta = cfg.snr_grid[i].eta;
    pt.trials = cfg.trials;
    pt.outage_count = counts[i];
    pt.p_hat = static_cast<double>(counts[i]) / static_cast<double>(cfg.trials);
    const ConfidenceInterval ci = wilson_interval(counts[i], cfg.trials);
    pt.ci_low = ci.low;
    pt.ci_high = ci.high;
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace detail

// Outage probability versus SNR for the configured scheme. In constrained
// relay mode a trial also counts as outage whenever the scheme's decode
// constraint fails at that SNR.
inline OutageCurve estimate_outage(const SimConfig& config) {
  config.validate();
  if (config.task != Task::outage)
    throw std::invalid_argument("estimate_outage: config task is not outage");
  return detail::curve_from_counts(config, detail::accumulate_counts(config));
}

// Probability that the scheme's decode constraint holds, versus SNR.
inline OutageCurve estimate_constraint_probability(const SimConfig& config) {
  config.validate();
  if (config.task != Task::constraint)
    throw std::invalid_argument(
        "estimate_constraint_probability: config task is not constraint");
  return detail::curve_from_counts(config, detail::accumulate_counts(config));
}

struct DiversityPoint {
  double snr_db = 0.0;
  double d_hat = 0.0;
};

// Finite-SNR diversity estimates: -d ln p / d ln eta by central finite
// differences at interior grid points. Points whose neighbors have zero
// outage counts cannot be differenced and are reported as skipped.
struct DiversityEstimate {
  std::vector<DiversityPoint> points;
  std::vector<double> skipped_snr_db;
};

inline DiversityEstimate estimate_finite_snr_diversity(const OutageCurve& curve) {
  std::size_t usable = 0;
  for (const CurvePoint& pt : curve.points)
    if (pt.p_hat > 0.0) ++usable;
  if (usable < 3)
    throw std::invalid_argument(
        "estimate_finite_snr_diversity: need at least 3 points with positive "
        "outage estimates");

  DiversityEstimate result;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    const CurvePoint& prev = curve.points[i - 1];
    const CurvePoint& next = curve.points[i + 1];
    if (prev.p_hat > 0.0 && curve.points[i].p_hat > 0.0 && next.p_hat > 0.0) {
      const double slope = (std::log(next.p_hat) - std::log(prev.p_hat)) /
                           (std::log(next.eta) - std::log(prev.eta));
      result.points.push_back({curve.points[i].snr_db, -slope});
    } else {
      result.skipped_snr_db.push_back(curve.points[i].snr_db);
    }
  }
  return result;
}

inline constexpr const char* kCurveCsvHeader =
    "snr_db,scheme,rate_mode,rate_value,L,rtilde,trials,outage_count,p_hat,"
    "ci_low,ci_high";

inline std::string curve_csv(const SimConfig& cfg, const OutageCurve& curve) {
  std::string scheme = scheme_name(cfg.scheme);
  if (cfg.task == Task::constraint) scheme += ":constraint";
  const std::string rate_mode =
      cfg.rate_mode == RateMode::fixed_rate ? "fixed" : "mux";
  std::string out = kCurveCsvHeader;
  out += '\n';
  for (const CurvePoint& pt : curve.points) {
    out += format_field(pt.snr_db);
    out += ',';
    out += scheme;
    out += ',';
    out += rate_mode;
    out += ',';
    out += format_field(cfg.rate_value);
    out += ',';
    out += std::to_string(cfg.frame_length);
    out += ',';
    out += format_field(cfg.geometry.rtilde);
    out += ',';
    out += std::to_string(pt.trials);
    out += ',';
    out += std::to_string(pt.outage_count);
    out += ',';
    out += format_field(pt.p_hat);
    out += ',';
    out += format_field(pt.ci_low);
    out += ',';
    out += format_field(pt.ci_high);
    out += '\n';
  }
  return out;
}

// Parsed CSV curves keyed by scheme label, for the diversity estimator.
struct NamedCurve {
  std::string scheme;
  OutageCurve curve;
};

inline std::vector<NamedCurve> parse_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("curve CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("curve CSV: missing column " + name);
  };
  const std::size_t col_snr = column("snr_db");
  const std::size_t col_scheme = column("scheme");
  const std::size_t col_trials = column("trials");
  const std::size_t col_count = column("outage_count");
  const std::size_t col_p = column("p_hat");

  std::vector<NamedCurve> curves;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() < header.size())
      throw std::runtime_error("curve CSV: short row");
    CurvePoint pt;
    pt.snr_db = std::stod(fields[col_snr]);
    pt.eta = std::pow(10.0, pt.snr_db / 10.0);
    pt.trials = std::stoull(fields[col_trials]);
    pt.outage_count = std::stoull(fields[col_count]);
    pt.p_hat = std::stod(fields[col_p]);
    const std::string& scheme = fields[col_scheme];
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const NamedCurve& c) { return c.scheme == scheme; });
    if (it == curves.end()) {
      curves.push_back({scheme, {}});
      it = curves.end() - 1;
    }
    it->curve.points.push_back(pt);
  }
  return curves;
}

struct RunSummary {
  std::size_t grid_points = 0;
  std::uint64_t trials = 0;
  double wall_seconds = 0.0;
};

// Execute the configured estimator and stream its CSV. Identical config and
// seed produce byte-identical output.
inline RunSummary run(const SimConfig& config, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const OutageCurve curve = config.task == Task::outage
                                ? estimate_outage(config)
                                : estimate_constraint_probability(config);
  out << curve_csv(config, curve);
  if (!out) throw std::runtime_error("run: failed writing CSV output");
  RunSummary summary;
  summary.grid_points = curve.points.size();
  summary.trials = config.trials;
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return summary;
}

}  // namespace relaysim
