#include "nyopsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nyopsim/error.hpp"

namespace nyopsim {

void SweepSpec::validate() const {
  if (t_values.empty()) throw Error(ErrorKind::ConfigInvalid, "t_values must not be empty");
  if (scenarios.empty()) throw Error(ErrorKind::ConfigInvalid, "at least one scenario is required");
  if (std::set<Scenario>(scenarios.begin(), scenarios.end()).size() != scenarios.size()) {
    throw Error(ErrorKind::ConfigInvalid, "duplicate scenario");
  }
  if (std::set<int>(t_values.begin(), t_values.end()).size() != t_values.size()) {
    throw Error(ErrorKind::ConfigInvalid, "duplicate T value");
  }
  if (replications < 2) {
    throw Error(ErrorKind::InsufficientReplications,
                "replications = " + std::to_string(replications) + "; the SD needs at least 2");
  }
  for (int T : t_values) {
    SimConfig cfg = base;
    cfg.window = T;
    cfg.validate();
  }
}

std::uint64_t replication_seed(std::uint64_t base_seed, int window, int replication) noexcept {
  return mix_seed(mix_seed(base_seed, static_cast<std::uint64_t>(window)), static_cast<std::uint64_t>(replication));
}

SimConfig replication_config(const SweepSpec& spec, Scenario scenario, int window, int replication) {
  SimConfig cfg = spec.base;
  cfg.scenario = scenario;
  cfg.window = window;
  cfg.seed = replication_seed(spec.base_seed, window, replication);
  return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, const TraceFactory& trace) {
  spec.validate();

  std::vector<Scenario> scenarios = spec.scenarios;
  std::sort(scenarios.begin(), scenarios.end());
  std::vector<int> windows = spec.t_values;
  std::sort(windows.begin(), windows.end());

  struct Job {
    Scenario scenario;
    int window;
    int replication;
  };
  std::vector<Job> jobs;
  jobs.reserve(spec.run_count());
  for (Scenario s : scenarios)
    for (int T : windows)
      for (int r = 0; r < spec.replications; ++r) jobs.push_back({s, T, r});

  SweepResult result;
  result.raw.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& job = jobs[i];
        const SimConfig cfg = replication_config(spec, job.scenario, job.window, job.replication);
        MessageSink sink = trace ? trace(job.scenario, job.window, job.replication) : MessageSink{};
        const RunLog log = run(cfg, std::move(sink));
        result.raw[i] = {job.scenario, job.window, job.replication, cfg.seed, run_metrics(log, cfg)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.report = aggregate(result.raw, spec.convention);
  return result;
}

std::optional<OutputFormat> parse_format(std::string_view text) noexcept {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return std::nullopt;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

constexpr int kRatioDecimals = 4;
constexpr int kPercentDecimals = 2;
constexpr Metric kMetrics[] = {Metric::Bwe, Metric::FillRateEmpirical, Metric::FillRateAnalytic};

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  line += "\r\n";
  return line;
}

std::string column_prefix(Scenario s) { return s == Scenario::Baseline ? "without_nyop" : "with_nyop"; }

nlohmann::json stat_json(const Stat& s) { return {{"mean", s.mean}, {"sd", s.sd}, {"n", s.n}}; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

std::string summary_csv(const AggregateReport& report, int k) {
  std::vector<std::string> header{"metric", "T"};
  for (Scenario s : report.scenarios) {
    header.push_back(column_prefix(s) + "_mean");
    header.push_back(column_prefix(s) + "_sd");
  }
  if (report.has_change()) {
    header.emplace_back("change_mean_pct");
    header.emplace_back("change_sd_pct");
  }
  std::string out = join_row(header);

  for (Metric m : kMetrics) {
    for (int T : report.t_values) {
      std::vector<std::string> row{std::string(to_string(m)), std::to_string(T)};
      for (Scenario s : report.scenarios) {
        const Stat& st = report.cell(s, k, T).get(m);
        row.push_back(format_fixed(st.mean, kRatioDecimals));
        row.push_back(format_fixed(st.sd, kRatioDecimals));
      }
      if (report.has_change()) {
        const ChangeRow& c = report.change_at(m, k, T);
        row.push_back(format_fixed(c.mean_pct, kPercentDecimals));
        row.push_back(format_fixed(c.sd_pct, kPercentDecimals));
      }
      out += join_row(row);
    }
    if (report.has_change()) {
      std::vector<std::string> footer{std::string(to_string(m)), "Mean of Change"};
      footer.resize(footer.size() + 2 * report.scenarios.size());
      const ChangeRow& c = report.mean_of_change.at({m, k});
      footer.push_back(format_fixed(c.mean_pct, kPercentDecimals));
      footer.push_back(format_fixed(c.sd_pct, kPercentDecimals));
      out += join_row(footer);
    }
  }
  return out;
}

std::string curve_csv(const AggregateReport& report, Metric metric) {
  std::string out = join_row({"scenario", "k", "T", "mean", "sd"});
  for (Scenario s : report.scenarios) {
    for (int k : report.tiers) {
      for (int T : report.t_values) {
        const Stat& st = report.cell(s, k, T).get(metric);
        out += join_row({std::string(to_string(s)), std::to_string(k), std::to_string(T),
                         format_fixed(st.mean, kRatioDecimals), format_fixed(st.sd, kRatioDecimals)});
      }
    }
  }
  return out;
}

std::string raw_csv(const SweepResult& result) {
  std::string out =
      join_row({"scenario", "T", "rep", "seed", "k", "bwe", "fr_empirical", "fr_analytic", "fr_analytic_raw"});
  for (const ReplicationMetrics& r : result.raw) {
    for (const TierMetrics& t : r.tiers) {
      out += join_row({std::string(to_string(r.scenario)), std::to_string(r.window), std::to_string(r.replication),
                       std::to_string(r.seed), std::to_string(t.k),
                       format_fixed(t.bwe.value_or(std::nan("")), kRatioDecimals),
                       format_fixed(t.fr_empirical, kRatioDecimals), format_fixed(t.fr_analytic, kRatioDecimals),
                       format_fixed(t.fr_analytic_raw, kRatioDecimals)});
    }
  }
  return out;
}

std::string report_json(const SweepResult& result, const SweepSpec& spec) {
  const AggregateReport& report = result.report;
  nlohmann::json j;
  const SimConfig& b = spec.base;
  j["sweep"] = {
      {"t_values", report.t_values},
      {"replications", spec.replications},
      {"base_seed", spec.base_seed},
      {"n_tiers", b.n_tiers},
      {"horizon", b.horizon},
      {"warmup", b.warmup},
      {"lead_time", b.policy.lead_time},
      {"safety_factor", b.policy.safety_factor},
      {"mu", b.mu},
      {"sigma", b.sigma},
      {"p_star", b.calibration.p_star},
      {"q_star", b.calibration.q_star},
      {"e_d", b.calibration.e_d},
      {"e_s", b.calibration.e_s},
      {"opening_fraction", b.negotiation.opening_fraction},
      {"max_rounds", b.negotiation.max_rounds},
      {"anchor", b.anchor == MarketAnchor::Forecast ? "forecast" : "static"},
      {"equilibrium_band", b.equilibrium_band},
      {"share_market_demand", b.share_market_demand},
      {"change_convention", report.convention == ChangeConvention::NyopRelative ? "nyop" : "baseline"},
  };

  nlohmann::json scenarios = nlohmann::json::object();
  for (Scenario s : report.scenarios) {
    nlohmann::json tiers = nlohmann::json::object();
    for (int k : report.tiers) {
      nlohmann::json by_t = nlohmann::json::object();
      for (int T : report.t_values) {
        const CellStats& c = report.cell(s, k, T);
        by_t[std::to_string(T)] = {{"bwe", stat_json(c.bwe)},
                                   {"fr_empirical", stat_json(c.fr_empirical)},
                                   {"fr_analytic", stat_json(c.fr_analytic)}};
      }
      tiers["k" + std::to_string(k)] = by_t;
    }
    scenarios[std::string(to_string(s))] = tiers;
  }
  j["scenarios"] = scenarios;

  if (report.has_change()) {
    nlohmann::json change = nlohmann::json::object();
    for (int k : report.tiers) {
      nlohmann::json tier = nlohmann::json::object();
      for (Metric m : kMetrics) {
        nlohmann::json by_t = nlohmann::json::object();
        for (int T : report.t_values) {
          const ChangeRow& c = report.change_at(m, k, T);
          by_t[std::to_string(T)] = {{"mean_pct", c.mean_pct}, {"sd_pct", c.sd_pct}};
        }
        const ChangeRow& mc = report.mean_of_change.at({m, k});
        tier[std::string(to_string(m))] = {{"by_t", by_t},
                                           {"mean_of_change", {{"mean_pct", mc.mean_pct}, {"sd_pct", mc.sd_pct}}}};
      }
      change["k" + std::to_string(k)] = tier;
    }
    j["change"] = change;
  }

  nlohmann::json raw = nlohmann::json::array();
  for (const ReplicationMetrics& r : result.raw) {
    nlohmann::json tiers = nlohmann::json::array();
    for (const TierMetrics& t : r.tiers) {
      tiers.push_back({{"k", t.k},
                       {"bwe", t.bwe ? nlohmann::json(*t.bwe) : nlohmann::json(nullptr)},
                       {"fr_empirical", t.fr_empirical},
                       {"fr_analytic", t.fr_analytic},
                       {"fr_analytic_raw", t.fr_analytic_raw}});
    }
    raw.push_back({{"scenario", to_string(r.scenario)},
                   {"T", r.window},
                   {"rep", r.replication},
                   {"seed", r.seed},
                   {"tiers", tiers}});
  }
  j["replications"] = raw;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit(const SweepResult& result, const SweepSpec& spec, OutputFormat format,
                                        const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (format == OutputFormat::Csv) {
    for (int k : result.report.tiers) {
      files.emplace_back(out_dir / ("summary_k" + std::to_string(k) + ".csv"), summary_csv(result.report, k));
    }
    files.emplace_back(out_dir / "curves_bwe.csv", curve_csv(result.report, Metric::Bwe));
    files.emplace_back(out_dir / "curves_fr.csv", curve_csv(result.report, Metric::FillRateEmpirical));
    files.emplace_back(out_dir / "raw.csv", raw_csv(result));
  } else {
    files.emplace_back(out_dir / "report.json", report_json(result, spec));
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [path, content] : files) {
    write_file(path, content);
    written.push_back(path);
  }
  return written;
}

}  // namespace nyopsim
