#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "nyopsim/engine.hpp"

namespace nyopsim {

double sample_mean(std::span<const double> xs);
/// n - 1 denominator. Requires at least two values.
double sample_variance(std::span<const double> xs);

/// Var(orders) / Var(demand). Throws DegenerateVariance when demand is constant.
double bullwhip(std::span<const double> orders, std::span<const double> demand);

/// Standardized normal loss G(z) = phi(z) - z (1 - Phi(z)).
double std_normal_loss(double z);
double std_normal_pdf(double z);
double std_normal_cdf(double z);

struct FillRate {
  double raw;      // may be negative for very volatile order streams
  double clamped;  // raw clipped to [0, 1]
};

/// 1 - G(z) sqrt(L) sqrt(var_q) / mu_k. Throws DegenerateMean when mu_k <= 0.
FillRate fill_rate_analytic(double z, double lead_time, double var_q, double mu_k);

/// Share of demand served from stock in the period it arrived.
double fill_rate_empirical(std::span<const double> demand_in, std::span<const double> filled_now);

struct TierMetrics {
  int k = 0;
  std::optional<double> bwe;  // empty when market demand has no variance
  double fr_analytic = 0.0;
  double fr_analytic_raw = 0.0;
  double fr_empirical = 0.0;
};

/// Metrics for every tier (k = n down to 1) over the post-warmup window.
std::vector<TierMetrics> run_metrics(const RunLog& log, const SimConfig& cfg);

enum class Metric { Bwe, FillRateEmpirical, FillRateAnalytic };
std::string_view to_string(Metric m) noexcept;

enum class ChangeConvention {
  NyopRelative,        // BWE: (b - n) / b, FR: (n - b) / n
  RelativeToBaseline,  // BWE: (b - n) / b, FR: (n - b) / b
};

double bwe_change_pct(double baseline, double nyop);
double fr_change_pct(double baseline, double nyop, ChangeConvention c = ChangeConvention::NyopRelative);
double change_pct(Metric m, double baseline, double nyop, ChangeConvention c);

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // n - 1; NaN below two values
  int n = 0;
};

Stat summarize(std::span<const double> xs);

struct ReplicationMetrics {
  Scenario scenario = Scenario::Baseline;
  int window = 0;  // T
  int replication = 0;
  std::uint64_t seed = 0;
  std::vector<TierMetrics> tiers;
};

struct CellKey {
  Scenario scenario;
  int k;
  int window;
  auto operator<=>(const CellKey&) const = default;
};

struct CellStats {
  Stat bwe;
  Stat fr_empirical;
  Stat fr_analytic;

  const Stat& get(Metric m) const;
};

struct ChangeRow {
  double mean_pct = 0.0;
  double sd_pct = 0.0;
};

struct AggregateReport {
  std::vector<Scenario> scenarios;
  std::vector<int> tiers;     // k = n .. 1
  std::vector<int> t_values;  // ascending
  ChangeConvention convention = ChangeConvention::NyopRelative;
  std::map<CellKey, CellStats> cells;
  std::map<std::tuple<Metric, int, int>, ChangeRow> change;  // (metric, k, T)
  std::map<std::pair<Metric, int>, ChangeRow> mean_of_change;

  bool has_change() const noexcept { return !change.empty(); }
  bool has(Scenario s) const noexcept;
  const CellStats& cell(Scenario s, int k, int window) const;
  const ChangeRow& change_at(Metric m, int k, int window) const;
};

/// Means and SDs per (scenario, k, T); change columns when both scenarios are
/// present. Throws InsufficientReplications when a cell has fewer than two.
AggregateReport aggregate(std::span<const ReplicationMetrics> reps,
                          ChangeConvention convention = ChangeConvention::NyopRelative);

}  // namespace nyopsim
