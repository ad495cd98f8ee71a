#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nyopsim/engine.hpp"
#include "nyopsim/metrics.hpp"

namespace nyopsim {

struct SweepSpec {
  std::vector<int> t_values{5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  std::vector<Scenario> scenarios{Scenario::Baseline, Scenario::Nyop};
  int replications = 30;
  std::uint64_t base_seed = 1;
  SimConfig base{};  // window, scenario and seed are overwritten per run
  unsigned threads = 1;
  ChangeConvention convention = ChangeConvention::NyopRelative;

  void validate() const;
  std::size_t run_count() const noexcept {
    return t_values.size() * scenarios.size() * static_cast<std::size_t>(replications);
  }
};

/// Demand seed for replication r at window T. The scenario is deliberately
/// not an input: paired Baseline/Nyop runs see the same market demand.
std::uint64_t replication_seed(std::uint64_t base_seed, int window, int replication) noexcept;

SimConfig replication_config(const SweepSpec& spec, Scenario scenario, int window, int replication);

/// Optional per-run trace hook; return an empty sink to skip a run.
using TraceFactory = std::function<MessageSink(Scenario, int window, int replication)>;

struct SweepResult {
  std::vector<ReplicationMetrics> raw;  // sorted by (scenario, T, replication)
  AggregateReport report;
};

SweepResult run_sweep(const SweepSpec& spec, const TraceFactory& trace = {});

enum class OutputFormat { Csv, Json };
std::optional<OutputFormat> parse_format(std::string_view text) noexcept;

/// One table per tier: rows per T plus a "Mean of Change" footer for each metric.
std::string summary_csv(const AggregateReport& report, int k);
/// Long-format (scenario, k, T, mean, sd) curve for one metric.
std::string curve_csv(const AggregateReport& report, Metric metric);
std::string raw_csv(const SweepResult& result);
std::string report_json(const SweepResult& result, const SweepSpec& spec);

/// Writes the output set for `format` into `out_dir` and returns the paths.
/// Everything is rendered before the first file is opened. Throws Error{Io}.
std::vector<std::filesystem::path> emit(const SweepResult& result, const SweepSpec& spec,
                                        OutputFormat format, const std::filesystem::path& out_dir);

/// RFC-4180 field quoting.
std::string csv_field(std::string_view text);
std::string format_fixed(double value, int decimals);

}  // namespace nyopsim
