// relaysim command-line front end.
//
// Subcommands:
//   outage      Monte Carlo outage-probability curve for one scheme
//   constraint  probability that a scheme's relay decode constraint holds
//   dmt         analytic diversity-multiplexing tradeoff curves
//   diversity   finite-SNR diversity estimates from an outage CSV
//
// All curve output is CSV; files are written atomically (temp + rename) and
// reruns with identical flags are byte-identical.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaysim/relaysim.hpp"

namespace {

using namespace relaysim;

std::vector<SnrPoint> parse_snr_range(const std::string& range) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char trailing = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &trailing) != 3)
    throw CLI::ValidationError("--snr", "expected start:stop:step in dB");
  if (step <= 0.0)
    throw CLI::ValidationError("--snr", "step must be positive");
  if (stop < start)
    throw CLI::ValidationError("--snr", "range must be ascending");
  std::vector<SnrPoint> grid;
  for (double db = start; db <= stop + 1e-9 * std::max(1.0, step); db += step)
    grid.push_back(SnrPoint::from_db(db));
  return grid;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "direct") return Scheme::direct;
  if (name == "successive" || name == "successive_ml") return Scheme::successive_ml;
  if (name == "dblast") return Scheme::dblast;
  if (name == "stc") return Scheme::stc;
  if (name == "mimo22") return Scheme::mimo22;
  throw CLI::ValidationError("--scheme", "unknown scheme: " + name);
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
  } else {
    write_file_atomic(out_path, content);
  }
}

struct CurveOptions {
  std::string scheme = "successive";
  std::string snr_range;
  int frame_length = 20;
  double mux = 0.0, rate = 0.0;
  double array_gain = 1.0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double rtilde = 0.1;
  double pathloss = 4.0;
  std::string relay = "perfect";
  std::size_t workers = 0;
  std::string out_path;
};

void add_common_flags(CLI::App& cmd, CurveOptions& opt, bool with_rate) {
  cmd.add_option("--scheme", opt.scheme,
                 "transmission scheme {direct|successive|dblast|stc|mimo22}")
      ->required();
  cmd.add_option("--snr", opt.snr_range, "SNR sweep start:stop:step in dB")
      ->required();
  cmd.add_option("--trials", opt.trials, "Monte Carlo trials per SNR point")
      ->capture_default_str();
  cmd.add_option("--seed", opt.seed, "master seed (64-bit unsigned)")
      ->capture_default_str();
  cmd.add_option("--rtilde", opt.rtilde, "source-relay distance (unitless)")
      ->capture_default_str();
  cmd.add_option("--pathloss", opt.pathloss, "path-loss exponent")
      ->capture_default_str();
  cmd.add_option("--workers", opt.workers, "worker threads, 0 = auto")
      ->capture_default_str();
  cmd.add_option("--out", opt.out_path, "output CSV path (default: stdout)");
  if (with_rate) {
    cmd.add_option("--L", opt.frame_length, "codewords per frame")
        ->capture_default_str();
    CLI::Option* mux = cmd.add_option(
        "--mux", opt.mux, "multiplexing gain r; rate R = r log2(1 + g eta)");
    CLI::Option* rate =
        cmd.add_option("--rate", opt.rate, "fixed spectral efficiency R in bits/slot");
    mux->excludes(rate);
    rate->excludes(mux);
    cmd.add_option("--g", opt.array_gain, "array gain g in the rate law")
        ->capture_default_str();
    cmd.add_option("--relay", opt.relay,
                   "relay model {perfect|constrained}")
        ->check(CLI::IsMember({"perfect", "constrained"}))
        ->capture_default_str();
  }
}

SimConfig build_config(const CLI::App& cmd, const CurveOptions& opt, Task task) {
  SimConfig cfg;
  cfg.snr_grid = parse_snr_range(opt.snr_range);
  cfg.frame_length = opt.frame_length;
  cfg.trials = opt.trials;
  cfg.master_seed = opt.seed;
  cfg.scheme = parse_scheme(opt.scheme);
  cfg.geometry = Geometry(opt.rtilde, opt.pathloss);
  cfg.workers = opt.workers;
  cfg.task = task;
  if (task == Task::outage) {
    const bool has_mux = cmd.count("--mux") > 0;
    const bool has_rate = cmd.count("--rate") > 0;
    if (!has_mux && !has_rate)
      throw CLI::RequiredError("one of --mux or --rate");
    cfg.rate_mode = has_rate ? RateMode::fixed_rate : RateMode::multiplexing;
    cfg.rate_value = has_rate ? opt.rate : opt.mux;
    cfg.array_gain = opt.array_gain;
    cfg.relay_mode =
        opt.relay == "constrained" ? RelayMode::constrained : RelayMode::perfect;
  }
  cfg.validate();
  return cfg;
}

int run_curve(const CLI::App& cmd, const CurveOptions& opt, Task task) {
  const SimConfig cfg = build_config(cmd, opt, task);
  std::ostringstream csv;
  const RunSummary summary = run(cfg, csv);
  emit(csv.str(), opt.out_path);
  std::fprintf(stderr, "%s: %zu SNR points, %llu trials each, %.2fs\n",
               task == Task::outage ? "outage" : "constraint",
               summary.grid_points,
               static_cast<unsigned long long>(summary.trials),
               summary.wall_seconds);
  return 0;
}

std::string dmt_csv(const std::string& curve_name) {
  std::optional<DmtCurve> curve;
  double max_x = 0.0;
  bool transform = false;
  if (curve_name == "stc") {
    curve = stc_dmt_curve();
  } else if (curve_name == "upper") {
    curve = upper_bound_dmt_curve();
  } else if (curve_name == "lower_bound_transform") {
    transform = true;
    max_x = 1.0;
  } else if (curve_name.rfind("mimo:", 0) == 0) {
    int nt = 0, nr = 0;
    char trailing = 0;
    if (std::sscanf(curve_name.c_str() + 5, "%dx%d%c", &nt, &nr, &trailing) != 2 ||
        nt < 1 || nr < 1)
      throw CLI::ValidationError("--curve", "expected mimo:NTxNR");
    curve = mimo_dmt_curve(nt, nr);
  } else {
    throw CLI::ValidationError(
        "--curve", "expected mimo:NTxNR, stc, upper or lower_bound_transform");
  }

  std::string out = "curve,kind,x,y\n";
  auto add_row = [&](const char* kind, double x, double y) {
    out += curve_name;
    out += ',';
    out += kind;
    out += ',';
    out += format_field(x);
    out += ',';
    out += format_field(y);
    out += '\n';
  };
  if (transform) {
    // x is the 2x2 outage probability, y the transformed network bound.
    add_row("breakpoint", 0.0, 0.0);
    add_row("breakpoint", 1.0, 1.0);
    for (int k = 0; k <= 100; ++k) {
      const double p = k / 100.0;
      add_row("sample", p, outage_lower_bound(p));
    }
  } else {
    for (const DmtCurve::Breakpoint& bp : curve->breakpoints)
      add_row("breakpoint", bp.r, bp.d);
    max_x = curve->max_r();
    const int steps = static_cast<int>(std::lround(max_x * 100.0));
    for (int k = 0; k <= steps; ++k) add_row("sample", k / 100.0, curve->value(k / 100.0));
  }
  return out;
}

std::string diversity_csv(const std::string& in_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input CSV: " + in_path);
  const std::vector<NamedCurve> curves = parse_curve_csv(in);
  if (curves.empty()) throw std::runtime_error("input CSV has no data rows");
  std::string out = "snr_db,scheme,d_hat\n";
  for (const NamedCurve& named : curves) {
    const DiversityEstimate estimate = estimate_finite_snr_diversity(named.curve);
    for (const DiversityPoint& pt : estimate.points) {
      out += format_field(pt.snr_db);
      out += ',';
      out += named.scheme;
      out += ',';
      out += format_field(pt.d_hat);
      out += '\n';
    }
    for (double db : estimate.skipped_snr_db)
      std::fprintf(stderr, "diversity: skipped %s dB for %s (zero-count neighbor)\n",
                   format_field(db).c_str(), named.scheme.c_str());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage and diversity-multiplexing simulator for a half-duplex "
               "successive-relaying network (1-antenna source, 2-antenna relay, "
               "2-antenna destination)"};
  app.require_subcommand(1);

  CurveOptions outage_opt;
  CLI::App* outage_cmd =
      app.add_subcommand("outage", "Monte Carlo outage-probability curve");
  add_common_flags(*outage_cmd, outage_opt, /*with_rate=*/true);

  CurveOptions constraint_opt;
  CLI::App* constraint_cmd = app.add_subcommand(
      "constraint", "probability that the relay decode constraint holds");
  add_common_flags(*constraint_cmd, constraint_opt, /*with_rate=*/false);

  std::string dmt_curve_name;
  std::string dmt_out;
  CLI::App* dmt_cmd = app.add_subcommand("dmt", "analytic DMT curves");
  dmt_cmd->add_option("--curve", dmt_curve_name,
                      "curve {mimo:NTxNR|stc|upper|lower_bound_transform}")
      ->required();
  dmt_cmd->add_option("--out", dmt_out, "output CSV path (default: stdout)");

  std::string div_in;
  std::string div_out;
  CLI::App* div_cmd = app.add_subcommand(
      "diversity", "finite-SNR diversity estimates from an outage CSV");
  div_cmd->add_option("--in", div_in, "input outage CSV")->required();
  div_cmd->add_option("--out", div_out, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 2 for usage errors, 0 for --help
  }

  try {
    if (outage_cmd->parsed())
      return run_curve(*outage_cmd, outage_opt, Task::outage);
    if (constraint_cmd->parsed())
      return run_curve(*constraint_cmd, constraint_opt, Task::constraint);
    if (dmt_cmd->parsed()) {
      emit(dmt_csv(dmt_curve_name), dmt_out);
      return 0;
    }
    if (div_cmd->parsed()) {
      emit(diversity_csv(div_in), div_out);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const CLI::RequiredError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
