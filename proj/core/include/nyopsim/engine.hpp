#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nyopsim/forecast.hpp"
#include "nyopsim/market.hpp"
#include "nyopsim/messaging.hpp"
#include "nyopsim/negotiation.hpp"
#include "nyopsim/policy.hpp"
#include "nyopsim/random.hpp"

namespace nyopsim {

enum class Scenario { Baseline, Nyop };

std::string_view to_string(Scenario s) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

/// Where a Nyop agent places the equilibrium of its per-period market.
enum class MarketAnchor {
  Forecast,  // Q* = mean + band * sd of the agent's market-demand window
  Static,    // Q* = calibration.q_star for every period
};

struct SimConfig {
  int n_tiers = 4;
  int horizon = 1000;
  int warmup = 100;
  int window = 10;  // T, moving-average periods
  double mu = 100.0;
  double sigma = 10.0;
  Scenario scenario = Scenario::Baseline;
  std::uint64_t seed = 1;  // demand stream seed
  MarketCalibration calibration{};
  PolicyParams policy{};
  NegotiationConfig negotiation{};
  MarketAnchor anchor = MarketAnchor::Forecast;
  double equilibrium_band = 1.0;
  bool share_market_demand = false;  // let Baseline agents see market demand too

  /// Throws Error{ConfigInvalid}.
  void validate() const;
};

/// Agent ids: 0 is the uncapacitated source, tiers are 1..n (n = retailer),
/// n + 1 is the end market.
constexpr AgentId source_id() noexcept { return 0; }
constexpr AgentId market_id(int n_tiers) noexcept { return n_tiers + 1; }

struct TierPeriod {
  double demand_in = 0.0;
  double received = 0.0;
  double filled = 0.0;      // total shipped downstream this period (backlog included)
  double filled_now = 0.0;  // part of this period's demand served immediately
  double desired = 0.0;
  double order = 0.0;
  bool negotiated = false;
  bool fallback = false;
  double unit_price = 0.0;  // transaction price when negotiated
  double on_hand = 0.0;     // end of period
  double backlog = 0.0;     // end of period
  double inventory_position = 0.0;

  bool operator==(const TierPeriod&) const = default;
};

struct TierState {
  int k = 0;
  double on_hand = 0.0;
  double backlog = 0.0;
  double on_order = 0.0;  // ordered upstream, not yet received
  double arriving = 0.0;  // delivered at the last period close, usable now
  double incoming_order = 0.0;
  ForecastWindow window{1};

  double inventory_position() const noexcept { return on_hand + on_order - backlog; }
};

struct RunLog {
  int n_tiers = 0;
  int warmup = 0;
  std::vector<double> market_demand;
  std::vector<std::vector<TierPeriod>> tiers;  // tiers[k - 1][t]
  double source_shipped = 0.0;
  double market_received = 0.0;
  std::vector<double> primed;      // material already in the pipeline at t = 0, by receiver id
  std::vector<double> in_transit;  // material not yet received at the end, by receiver id

  const std::vector<TierPeriod>& tier(int k) const { return tiers.at(static_cast<std::size_t>(k - 1)); }

  /// Post-warmup slice of one field for tier k.
  std::vector<double> measured(int k, double TierPeriod::*field) const;
  std::vector<double> measured_market_demand() const;

  bool operator==(const RunLog&) const = default;
};

struct OrderDecision {
  double quantity = 0.0;
  bool negotiated = false;
  std::optional<NegotiationTranscript> transcript;
  std::optional<MarketPoint> market;  // equilibrium the agent negotiated against
};

/// Procurement step for one agent: pass-through in Baseline, NYOP
/// negotiation against the agent's market view in Nyop.
OrderDecision decide_order(const SimConfig& cfg, double desired, const ForecastWindow& market_view);

/// Calibration a Nyop agent uses for the current period.
MarketCalibration period_calibration(const SimConfig& cfg, const ForecastWindow& market_view);

/// One replication: the tier agents, the transport between them and the
/// market demand stream. Single-threaded; independent instances share nothing.
class World {
 public:
  explicit World(SimConfig cfg, MessageSink trace = {});

  int period() const noexcept { return t_; }
  bool done() const noexcept { return t_ >= cfg_.horizon; }
  const SimConfig& config() const noexcept { return cfg_; }

  void step();

  const TierState& tier(int k) const { return tiers_.at(static_cast<std::size_t>(k - 1)); }
  const Transport& transport() const noexcept { return transport_; }
  const RunLog& log() const noexcept { return log_; }

  RunLog finish() &&;

 private:
  void send(Performative p, AgentId from, AgentId to, Payload payload);
  void dispatch(const Message& m);
  void act(TierState& tier, double market_demand);

  SimConfig cfg_;
  MessageSink trace_;
  Transport transport_;
  DemandStream demand_;
  std::vector<TierState> tiers_;
  double source_pending_ = 0.0;
  int t_ = 0;
  RunLog log_;
};

/// Runs cfg.horizon periods. Deterministic in cfg.
RunLog run(const SimConfig& cfg, MessageSink trace = {});

/// Per-period state dump, columns rep,t,k,demand_in,filled,order,on_hand,backlog.
std::string state_dump_csv(const RunLog& log, int replication, bool header = true);

}  // namespace nyopsim
