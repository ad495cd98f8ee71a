#include "nyopsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <iterator>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "nyopsim/error.hpp"

namespace nyopsim {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorKind::InsufficientData, "mean of an empty series");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorKind::InsufficientData, "variance needs two values");
  const double m = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double bullwhip(std::span<const double> orders, std::span<const double> demand) {
  const double var_d = sample_variance(demand);
  if (!(var_d > 0.0)) throw Error(ErrorKind::DegenerateVariance, "demand has zero variance");
  return sample_variance(orders) / var_d;
}

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_loss(double z) {
  const double upper_tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
  return std_normal_pdf(z) - z * upper_tail;
}

FillRate fill_rate_analytic(double z, double lead_time, double var_q, double mu_k) {
  if (!(mu_k > 0.0)) throw Error(ErrorKind::DegenerateMean, "mean demand must be > 0");
  if (lead_time < 0.0 || var_q < 0.0) throw Error(ErrorKind::InvalidArgument, "lead time and variance must be >= 0");
  const double raw = 1.0 - std_normal_loss(z) * std::sqrt(lead_time) * std::sqrt(var_q) / mu_k;
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

double fill_rate_empirical(std::span<const double> demand_in, std::span<const double> filled_now) {
  if (demand_in.size() != filled_now.size()) throw Error(ErrorKind::InvalidArgument, "series lengths differ");
  double demand = 0.0;
  double filled = 0.0;
  for (std::size_t i = 0; i < demand_in.size(); ++i) {
    demand += demand_in[i];
    filled += std::min(filled_now[i], demand_in[i]);
  }
  if (!(demand > 0.0)) throw Error(ErrorKind::DegenerateMean, "no demand in window");
  return std::clamp(filled / demand, 0.0, 1.0);
}

std::vector<TierMetrics> run_metrics(const RunLog& log, const SimConfig& cfg) {
  const std::vector<double> market = log.measured_market_demand();
  const bool market_varies = market.size() >= 2 && sample_variance(market) > 0.0;

  std::vector<TierMetrics> out;
  for (int k = log.n_tiers; k >= 1; --k) {
    TierMetrics m;
    m.k = k;
    const auto orders = log.measured(k, &TierPeriod::order);
    const auto demand_in = log.measured(k, &TierPeriod::demand_in);
    const auto filled_now = log.measured(k, &TierPeriod::filled_now);
    if (market_varies) m.bwe = bullwhip(orders, market);

    m.fr_analytic = m.fr_analytic_raw = kNaN;
    if (demand_in.size() >= 2 && sample_mean(demand_in) > 0.0) {
      const FillRate fr = fill_rate_analytic(cfg.policy.safety_factor, cfg.policy.lead_time,
                                             sample_variance(demand_in), sample_mean(demand_in));
      m.fr_analytic = fr.clamped;
      m.fr_analytic_raw = fr.raw;
    }
    try {
      m.fr_empirical = fill_rate_empirical(demand_in, filled_now);
    } catch (const Error&) {
      m.fr_empirical = kNaN;
    }
    out.push_back(m);
  }
  return out;
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Bwe: return "bwe";
    case Metric::FillRateEmpirical: return "fr_empirical";
    case Metric::FillRateAnalytic: return "fr_analytic";
  }
  return "unknown";
}

double bwe_change_pct(double baseline, double nyop) { return (baseline - nyop) / baseline * 100.0; }

double fr_change_pct(double baseline, double nyop, ChangeConvention c) {
  const double denom = c == ChangeConvention::NyopRelative ? nyop : baseline;
  return (nyop - baseline) / denom * 100.0;
}

double change_pct(Metric m, double baseline, double nyop, ChangeConvention c) {
  return m == Metric::Bwe ? bwe_change_pct(baseline, nyop) : fr_change_pct(baseline, nyop, c);
}

Stat summarize(std::span<const double> xs) {
  std::vector<double> finite;
  finite.reserve(xs.size());
  std::copy_if(xs.begin(), xs.end(), std::back_inserter(finite), [](double x) { return std::isfinite(x); });
  Stat s;
  s.n = static_cast<int>(finite.size());
  s.mean = finite.empty() ? kNaN : sample_mean(finite);
  s.sd = finite.size() < 2 ? kNaN : std::sqrt(sample_variance(finite));
  return s;
}

const Stat& CellStats::get(Metric m) const {
  switch (m) {
    case Metric::Bwe: return bwe;
    case Metric::FillRateEmpirical: return fr_empirical;
    case Metric::FillRateAnalytic: return fr_analytic;
  }
  return bwe;
}

bool AggregateReport::has(Scenario s) const noexcept {
  return std::find(scenarios.begin(), scenarios.end(), s) != scenarios.end();
}

const CellStats& AggregateReport::cell(Scenario s, int k, int window) const {
  const auto it = cells.find({s, k, window});
  if (it == cells.end()) throw Error(ErrorKind::InvalidArgument, "no such cell");
  return it->second;
}

const ChangeRow& AggregateReport::change_at(Metric m, int k, int window) const {
  const auto it = change.find({m, k, window});
  if (it == change.end()) throw Error(ErrorKind::InvalidArgument, "no change row");
  return it->second;
}

AggregateReport aggregate(std::span<const ReplicationMetrics> reps, ChangeConvention convention) {
  AggregateReport report;
  report.convention = convention;

  std::set<Scenario> scenarios;
  std::set<int> windows;
  std::set<int, std::greater<>> tiers;
  std::map<std::pair<Scenario, int>, int> counts;
  std::map<CellKey, std::array<std::vector<double>, 3>> samples;
  for (const ReplicationMetrics& r : reps) {
    scenarios.insert(r.scenario);
    windows.insert(r.window);
    ++counts[{r.scenario, r.window}];
    for (const TierMetrics& t : r.tiers) {
      tiers.insert(t.k);
      auto& s = samples[{r.scenario, t.k, r.window}];
      s[0].push_back(t.bwe.value_or(kNaN));
      s[1].push_back(t.fr_empirical);
      s[2].push_back(t.fr_analytic);
    }
  }
  for (const auto& [cell, n] : counts) {
    if (n < 2) {
      throw Error(ErrorKind::InsufficientReplications,
                  "cell " + std::string(to_string(cell.first)) + "/T=" + std::to_string(cell.second) +
                      " has " + std::to_string(n) + " replication(s); need >= 2");
    }
  }
  if (reps.empty()) throw Error(ErrorKind::InsufficientReplications, "no replications");

  report.scenarios.assign(scenarios.begin(), scenarios.end());
  report.t_values.assign(windows.begin(), windows.end());
  report.tiers.assign(tiers.begin(), tiers.end());
  for (const auto& [key, s] : samples) {
    report.cells[key] = CellStats{summarize(s[0]), summarize(s[1]), summarize(s[2])};
  }

  if (report.has(Scenario::Baseline) && report.has(Scenario::Nyop)) {
    for (Metric m : {Metric::Bwe, Metric::FillRateEmpirical, Metric::FillRateAnalytic}) {
      for (int k : report.tiers) {
        ChangeRow total;
        for (int T : report.t_values) {
          const Stat& b = report.cell(Scenario::Baseline, k, T).get(m);
          const Stat& n = report.cell(Scenario::Nyop, k, T).get(m);
          const ChangeRow row{change_pct(m, b.mean, n.mean, convention), change_pct(m, b.sd, n.sd, convention)};
          report.change[{m, k, T}] = row;
          total.mean_pct += row.mean_pct;
          total.sd_pct += row.sd_pct;
        }
        const double count = static_cast<double>(report.t_values.size());
        report.mean_of_change[{m, k}] = {total.mean_pct / count, total.sd_pct / count};
      }
    }
  }
  return report;
}

}  // namespace nyopsim
