// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "nyopsim/experiment.hpp"

using namespace nyopsim;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!detail.empty()) std::printf("       %s\n", detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double x, int decimals = 4) { return format_fixed(x, decimals); }

double bwe(const AggregateReport& r, Scenario s, int k, int T) { return r.cell(s, k, T).bwe.mean; }
double fr(const AggregateReport& r, Scenario s, int k, int T) { return r.cell(s, k, T).fr_empirical.mean; }

const char* name(Scenario s) { return s == Scenario::Baseline ? "baseline" : "nyop"; }

void upstream_amplification(const AggregateReport& r) {
  bool ok = true;
  std::ostringstream d;
  for (int T : {5, 10, 15}) {
    d << "T=" << T << ":";
    for (int k = 4; k >= 1; --k) {
      d << ' ' << fmt(bwe(r, Scenario::Baseline, k, T), 2);
      if (k < 4) ok &= bwe(r, Scenario::Baseline, k, T) > bwe(r, Scenario::Baseline, k + 1, T);
    }
    d << (T < 15 ? "; " : "");
  }
  report(1, ok, "baseline BWE strictly increases upstream (k=4..1) at T=5,10,15", d.str());
}

void bwe_decreasing_in_t(const AggregateReport& r) {
  bool ok = true;
  std::ostringstream d;
  std::vector<double> ts(r.t_values.begin(), r.t_values.end());
  for (Scenario s : {Scenario::Baseline, Scenario::Nyop}) {
    d << name(s) << " rho:";
    for (int k = 4; k >= 1; --k) {
      std::vector<double> ys;
      for (int T : r.t_values) ys.push_back(bwe(r, s, k, T));
      const double rho = oracle::spearman(ts, ys);
      ok &= bwe(r, s, k, 15) < bwe(r, s, k, 5) && rho <= -0.8;
      d << ' ' << fmt(rho, 3);
    }
    d << "  ";
  }
  report(2, ok, "BWE(T=15) < BWE(T=5) and Spearman(T, BWE) <= -0.8 for every tier, both scenarios", d.str());
}

void nyop_reduces_bwe(const AggregateReport& r) {
  bool ok = true;
  for (int k = 4; k >= 1; --k)
    for (int T : r.t_values) ok &= bwe(r, Scenario::Nyop, k, T) < bwe(r, Scenario::Baseline, k, T);
  const double retailer = r.mean_of_change.at({Metric::Bwe, 4}).mean_pct;
  ok &= retailer >= 10.0 && retailer <= 50.0;
  std::ostringstream d;
  d << "mean change by tier (k=4..1):";
  for (int k = 4; k >= 1; --k) d << ' ' << fmt(r.mean_of_change.at({Metric::Bwe, k}).mean_pct, 2) << '%';
  report(3, ok, "nyop BWE < baseline BWE for every tier and T; retailer mean reduction in [10%, 50%]", d.str());
}

void lower_bound(const AggregateReport& r, int lead) {
  bool ok = true;
  std::ostringstream d;
  for (int T : {5, 10, 15}) {
    const double L = lead;
    const double bound = 0.9 * (1.0 + 2.0 * L / T + 2.0 * L * L / (T * T));
    const double got = bwe(r, Scenario::Baseline, 4, T);
    ok &= got >= bound;
    d << "T=" << T << ": " << fmt(got, 3) << " >= " << fmt(bound, 3) << "  ";
  }
  report(4, ok, "baseline retailer BWE >= 0.9 (1 + 2L/T + 2L^2/T^2)", d.str());
}

void fr_increasing_in_t(const AggregateReport& r) {
  bool ok = true;
  std::ostringstream d;
  for (Scenario s : {Scenario::Baseline, Scenario::Nyop}) {
    d << name(s) << ":";
    for (int k = 4; k >= 1; --k) {
      ok &= fr(r, s, k, 15) > fr(r, s, k, 5);
      d << ' ' << fmt(fr(r, s, k, 5), 3) << "->" << fmt(fr(r, s, k, 15), 3);
    }
    d << "  ";
  }
  report(5, ok, "empirical FR(T=15) > FR(T=5) for every tier, both scenarios", d.str());
}

void nyop_improves_fr(const AggregateReport& r) {
  bool ok = true;
  std::ostringstream d;
  for (int k = 4; k >= 1; --k) {
    double b = 0.0, n = 0.0;
    for (int T : r.t_values) {
      b += fr(r, Scenario::Baseline, k, T);
      n += fr(r, Scenario::Nyop, k, T);
    }
    b /= static_cast<double>(r.t_values.size());
    n /= static_cast<double>(r.t_values.size());
    ok &= n >= b;
    d << "k=" << k << ' ' << fmt(b, 3) << "->" << fmt(n, 3) << "  ";
  }
  report(6, ok, "nyop empirical FR >= baseline FR per tier, averaged over T", d.str());
}

void loss_accuracy() {
  bool ok = std::abs(std_normal_loss(0.0) - oracle::loss_by_quadrature(0.0)) <= 1e-6 &&
            std::abs(std_normal_loss(3.0) - oracle::loss_by_quadrature(3.0)) <= 1e-6 &&
            std::abs(std_normal_loss(0.0) - 0.3989423) <= 1e-6 && std::abs(std_normal_loss(3.0) - 0.0003822) <= 1e-6;
  for (double z : {0.5, 1.0, 2.0}) ok &= std::abs(std_normal_loss(-z) - (std_normal_loss(z) + z)) <= 1e-7;
  report(7, ok, "loss function G(0), G(3) within 1e-6; G(-z) = G(z) + z within 1e-7",
         "G(0)=" + fmt(std_normal_loss(0.0), 7) + " G(3)=" + fmt(std_normal_loss(3.0), 7));
}

void negotiation_oracle() {
  const MarketCalibration cal;
  const DemandCurve demand = calibrate_demand(cal);
  const SupplyCurve supply = calibrate_supply(cal);
  const NegotiationConfig cfg;
  const MarketPoint eq = equilibrium(demand, supply);
  bool ok = std::abs(eq.quantity - 100.0) < 1e-9 && std::abs(eq.price - 100.0) < 1e-9;
  int accepted = 0;
  for (int qi = 1; qi <= 174; ++qi) {
    const double q = qi;
    const double value = (demand.a() - q) / demand.b();
    const double floor_price = (q - supply.c()) / supply.d();
    const bool predicted = cfg.opening_fraction * value >= floor_price || q <= eq.quantity;
    const int round = oracle::first_accepting_round(demand.a(), demand.b(), supply.c(), supply.d(), q,
                                                    cfg.opening_fraction, cfg.max_rounds);
    ok &= predicted == (round > 0);
    const NegotiationOutcome out = negotiate(demand, supply, q, cfg);
    if (const auto* a = std::get_if<Accepted>(&out)) {
      ++accepted;
      ok &= predicted && a->rounds_used == round && a->quantity == q;
    } else if (const auto* f = std::get_if<Fallback>(&out)) {
      ok &= !predicted && std::abs(f->quantity - 100.0) < 1e-9;
    } else {
      ok = false;
    }
  }
  report(8, ok, "negotiation matches brute-force oracle over q = 1..174",
         std::to_string(accepted) + " accepted, " + std::to_string(174 - accepted) + " fall back to q = 100");
}

bool invariants_hold(const RunLog& log, const SimConfig& cfg) {
  const double tol = 1e-7 * cfg.mu;
  const double on_hand0 = std::max(
      0.0, base_stock_level(cfg.mu, cfg.sigma, cfg.policy) - cfg.mu * (cfg.policy.lead_time + 1));
  bool ok = true;
  for (int k = 1; k <= log.n_tiers; ++k) {
    double on_hand = on_hand0, backlog = 0.0, received = 0.0, shipped_out = 0.0;
    for (const TierPeriod& p : log.tier(k)) {
      ok &= p.filled <= on_hand + p.received + tol;
      ok &= std::abs(p.on_hand - (on_hand + p.received - p.filled)) <= tol;
      ok &= std::abs(p.backlog - (backlog + p.demand_in - p.filled)) <= tol;
      ok &= p.backlog >= 0.0 && p.on_hand >= 0.0;
      on_hand = p.on_hand;
      backlog = p.backlog;
      received += p.received;
      shipped_out += p.filled;
    }
    double shipped_in = log.source_shipped;
    if (k > 1) {
      shipped_in = 0.0;
      for (const TierPeriod& p : log.tier(k - 1)) shipped_in += p.filled;
    }
    ok &= std::abs(shipped_in + log.primed[k] - received - log.in_transit[k]) <= tol * cfg.horizon;
    if (k == log.n_tiers) {
      ok &= std::abs(shipped_out - log.market_received - log.in_transit[k + 1]) <= tol * cfg.horizon;
    }
  }
  return ok;
}

void conservation_and_determinism() {
  bool ok = true;
  std::ostringstream d;
  for (Scenario s : {Scenario::Baseline, Scenario::Nyop}) {
    SimConfig cfg;
    cfg.scenario = s;
    cfg.seed = replication_seed(1, cfg.window, 0);
    const bool balanced = invariants_hold(run(cfg), cfg);

    std::string dumps[2], traces[2];
    for (int i = 0; i < 2; ++i) {
      std::ostringstream trace;
      const JsonlTraceWriter writer(trace);
      dumps[i] = state_dump_csv(run(cfg, writer), 0);
      traces[i] = trace.str();
    }
    const bool identical = dumps[0] == dumps[1] && traces[0] == traces[1] && !traces[0].empty();

    cfg.sigma = 0.0;
    const RunLog flat = run(cfg);
    bool stationary = true;
    for (int k = 1; k <= cfg.n_tiers; ++k)
      for (const TierPeriod& p : flat.tier(k)) stationary &= p.order == cfg.mu && p.backlog == 0.0;

    ok &= balanced && identical && stationary;
    d << name(s) << ": balance " << (balanced ? "ok" : "broken") << ", repeat "
      << (identical ? "identical" : "differs") << ", sigma=0 " << (stationary ? "constant" : "varies") << "  ";
  }
  report(9, ok, "conservation over 1000 periods, byte-identical reruns, sigma=0 orders constant at mu", d.str());
}

void change_arithmetic() {
  const std::string a = format_fixed(bwe_change_pct(7.84, 5.94), 2);
  const std::string b = format_fixed(fr_change_pct(0.62, 0.64), 2);
  report(10, a == "24.23" && b == "3.13", "change arithmetic: (7.84, 5.94) -> 24.23%, (0.62, 0.64) -> 3.13%",
         a + "%, " + b + "%");
}

}  // namespace

int main() {
  try {
    SweepSpec spec;  // T = 5..15, both scenarios, 30 paired replications, horizon 1000, warmup 100
    std::printf("running %zu replications...\n", spec.run_count());
    const SweepResult sweep = run_sweep(spec);
    const AggregateReport& r = sweep.report;

    upstream_amplification(r);
    bwe_decreasing_in_t(r);
    nyop_reduces_bwe(r);
    lower_bound(r, spec.base.policy.lead_time);
    fr_increasing_in_t(r);
    nyop_improves_fr(r);
    loss_accuracy();
    negotiation_oracle();
    conservation_and_determinism();
    change_arithmetic();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
