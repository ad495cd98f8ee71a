// nyopsim: sweep T and scenarios, or run a single replication.
//
// Exit codes: 0 ok, 1 invalid configuration or simulation error, 2 usage
// error, 3 output could not be written.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "nyopsim/error.hpp"
#include "nyopsim/experiment.hpp"

namespace fs = std::filesystem;
using namespace nyopsim;

namespace {

struct Options {
  std::string scenario = "both";
  int t_min = 5;
  int t_max = 15;
  int reps = 30;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string trace;
  std::string out_dir = "nyopsim_out";
  std::string format = "csv";
  std::string anchor = "forecast";
  std::string convention = "nyop";
  SimConfig sim;

  // run subcommand
  int window = 10;
  int rep = 0;
  std::string state_dump;
};

void add_model_options(CLI::App& app, Options& o) {
  SimConfig& s = o.sim;
  app.add_option("--horizon", s.horizon, "Periods per replication")->capture_default_str();
  app.add_option("--warmup", s.warmup, "Periods excluded from metrics")->capture_default_str();
  app.add_option("--lead-time", s.policy.lead_time, "Lead time L in periods (>= 1)")->capture_default_str();
  app.add_option("--mu", s.mu, "Mean market demand")->capture_default_str();
  app.add_option("--sigma", s.sigma, "Std dev of market demand")->capture_default_str();
  app.add_option("--ed", s.calibration.e_d, "Demand elasticity (< 0)")->capture_default_str();
  app.add_option("--es", s.calibration.e_s, "Supply elasticity (> 0)")->capture_default_str();
  app.add_option("--p-star", s.calibration.p_star, "Reference price")->capture_default_str();
  app.add_option("--z", s.policy.safety_factor, "Safety factor")->capture_default_str();
  app.add_option("--beta", s.negotiation.opening_fraction, "Opening bid fraction of valuation")->capture_default_str();
  app.add_option("--max-rounds", s.negotiation.max_rounds, "Bid rounds before fallback")->capture_default_str();
  app.add_option("--tiers", s.n_tiers, "Number of tiers")->capture_default_str();
  app.add_option("--anchor", o.anchor, "Nyop market anchor")
      ->check(CLI::IsMember({"forecast", "static"}))
      ->capture_default_str();
  app.add_option("--band", s.equilibrium_band, "Forecast anchor: Q* = mean + band * sd")->capture_default_str();
  app.add_flag("--share-demand", s.share_market_demand, "Broadcast market demand to Baseline agents too");
  app.add_option("--seed", o.seed, "Base seed")->capture_default_str();
  app.add_option("--trace", o.trace, "Write the JSONL message trace to this file");
}

std::unique_ptr<std::ofstream> open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return out;
}

// Sweep traces cover replication 0 of every (scenario, T) cell, one file each,
// named after the --trace path: trace.jsonl -> trace_nyop_T5.jsonl.
fs::path sweep_trace_path(const fs::path& base, Scenario s, int window) {
  fs::path p = base;
  p.replace_filename(base.stem().string() + "_" + std::string(to_string(s)) + "_T" + std::to_string(window) +
                     base.extension().string());
  return p;
}

int sweep(const Options& o) {
  SweepSpec spec;
  spec.t_values.clear();
  for (int T = o.t_min; T <= o.t_max; ++T) spec.t_values.push_back(T);
  if (o.scenario == "both") {
    spec.scenarios = {Scenario::Baseline, Scenario::Nyop};
  } else {
    spec.scenarios = {*parse_scenario(o.scenario)};
  }
  spec.replications = o.reps;
  spec.base_seed = o.seed;
  spec.base = o.sim;
  spec.threads = o.threads;
  spec.convention = o.convention == "nyop" ? ChangeConvention::NyopRelative : ChangeConvention::RelativeToBaseline;
  spec.validate();

  std::map<std::pair<Scenario, int>, std::shared_ptr<std::ofstream>> traces;
  TraceFactory factory;
  if (!o.trace.empty()) {
    for (Scenario s : spec.scenarios)
      for (int T : spec.t_values) traces[{s, T}] = open_out(sweep_trace_path(o.trace, s, T));
    factory = [&traces](Scenario s, int T, int r) -> MessageSink {
      if (r != 0) return {};
      return JsonlTraceWriter(*traces.at({s, T}));
    };
  }

  const SweepResult result = run_sweep(spec, factory);
  const auto format = *parse_format(o.format);
  for (const fs::path& p : emit(result, spec, format, o.out_dir)) std::cout << p.string() << '\n';
  return 0;
}

int single(const Options& o) {
  if (o.scenario == "both") throw CLI::ValidationError("--scenario", "run needs baseline or nyop");
  SweepSpec spec;
  spec.base = o.sim;
  spec.base_seed = o.seed;
  const SimConfig cfg = replication_config(spec, *parse_scenario(o.scenario), o.window, o.rep);

  std::unique_ptr<std::ofstream> trace;
  MessageSink sink;
  if (!o.trace.empty()) {
    trace = open_out(o.trace);
    sink = JsonlTraceWriter(*trace);
  }
  const RunLog log = run(cfg, sink);
  if (trace && !trace->flush()) throw Error(ErrorKind::Io, "write failed for " + o.trace);

  if (!o.state_dump.empty()) {
    auto dump = open_out(o.state_dump);
    *dump << state_dump_csv(log, o.rep);
    if (!dump->flush()) throw Error(ErrorKind::Io, "write failed for " + o.state_dump);
  }

  std::cout << "k,bwe,fr_empirical,fr_analytic\n";
  for (const TierMetrics& m : run_metrics(log, cfg)) {
    std::cout << m.k << ',' << format_fixed(m.bwe.value_or(std::nan("")), 4) << ','
              << format_fixed(m.fr_empirical, 4) << ',' << format_fixed(m.fr_analytic, 4) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Multi-tier supply-chain simulator with NYOP procurement"};
  app.set_version_flag("--version", "nyopsim 0.1.0");
  add_model_options(app, o);
  app.add_option("--scenario,--scenarios", o.scenario, "baseline, nyop or both")
      ->check(CLI::IsMember({"baseline", "nyop", "both"}))
      ->capture_default_str();

  app.add_option("--t-min", o.t_min, "Smallest moving-average window T")->capture_default_str();
  app.add_option("--t-max", o.t_max, "Largest moving-average window T")->capture_default_str();
  app.add_option("--reps", o.reps, "Replications per (scenario, T) cell")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--change-convention", o.convention, "FR change denominator: nyop or baseline")
      ->check(CLI::IsMember({"nyop", "baseline"}))
      ->capture_default_str();

  CLI::App* run_cmd = app.add_subcommand("run", "Run one replication and print its metrics");
  run_cmd->fallthrough();
  run_cmd->add_option("-T,--window", o.window, "Moving-average window")->capture_default_str();
  run_cmd->add_option("--rep", o.rep, "Replication index (selects the demand stream)")->capture_default_str();
  run_cmd->add_option("--state-dump", o.state_dump, "Write the per-period state CSV to this file");

  try {
    app.parse(argc, argv);
    o.sim.anchor = o.anchor == "static" ? MarketAnchor::Static : MarketAnchor::Forecast;
    o.sim.calibration.q_star = o.sim.mu;  // reference quantity follows mean demand
    if (o.t_min > o.t_max) throw CLI::ValidationError("--t-min", "must not exceed --t-max");
    return *run_cmd ? single(o) : sweep(o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "nyopsim: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? 3 : 1;
  } catch (const std::exception& e) {
    std::cerr << "nyopsim: " << e.what() << '\n';
    return 1;
  }
}
