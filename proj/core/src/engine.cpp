#include "nyopsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "nyopsim/error.hpp"

namespace nyopsim {

namespace {
// Stock arithmetic accumulates rounding residue around zero; anything below
// this fraction of mean demand is treated as exactly zero.
constexpr double kResidue = 1e-9;

double snap(double x, double scale) { return std::abs(x) < kResidue * scale ? 0.0 : x; }
}  // namespace

std::string_view to_string(Scenario s) noexcept {
  return s == Scenario::Baseline ? "baseline" : "nyop";
}

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
  if (text == "baseline") return Scenario::Baseline;
  if (text == "nyop") return Scenario::Nyop;
  return std::nullopt;
}

void SimConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::ConfigInvalid, why); };
  if (n_tiers < 1) fail("n_tiers must be >= 1");
  if (window < 2) fail("window T must be >= 2");
  if (warmup < window) fail("warmup must be >= T");
  if (horizon <= warmup) fail("horizon must exceed warmup");
  if (policy.lead_time < 1) fail("the engine needs lead_time >= 1");
  if (!std::isfinite(policy.safety_factor)) fail("safety factor must be finite");
  if (!(mu > 0.0) || !std::isfinite(mu)) fail("mu must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail("sigma must be >= 0");
  if (!(equilibrium_band >= 0.0) || !std::isfinite(equilibrium_band)) fail("equilibrium band must be >= 0");
  try {
    calibration.validate();
    negotiation.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::vector<double> RunLog::measured(int k, double TierPeriod::*field) const {
  const auto& series = tier(k);
  std::vector<double> out;
  out.reserve(series.size());
  for (std::size_t t = static_cast<std::size_t>(warmup); t < series.size(); ++t) out.push_back(series[t].*field);
  return out;
}

std::vector<double> RunLog::measured_market_demand() const {
  return {market_demand.begin() + std::min<std::ptrdiff_t>(warmup, std::ssize(market_demand)),
          market_demand.end()};
}

MarketCalibration period_calibration(const SimConfig& cfg, const ForecastWindow& market_view) {
  MarketCalibration cal = cfg.calibration;
  if (cfg.anchor == MarketAnchor::Forecast) {
    const double spread = market_view.size() >= 2 ? market_view.stddev() : 0.0;
    cal.q_star = market_view.mean() + cfg.equilibrium_band * spread;
  }
  return cal;
}

OrderDecision decide_order(const SimConfig& cfg, double desired, const ForecastWindow& market_view) {
  OrderDecision out;
  if (cfg.scenario == Scenario::Baseline || !(desired > 0.0)) {
    out.quantity = std::max(0.0, desired);
    return out;
  }
  out.negotiated = true;
  const MarketCalibration cal = period_calibration(cfg, market_view);
  if (!(cal.q_star > 0.0)) {
    // No market to trade in (all observed demand was zero).
    out.transcript = NegotiationTranscript{{}, Failed{}};
    return out;
  }
  const DemandCurve demand = calibrate_demand(cal);
  const SupplyCurve supply = calibrate_supply(cal);
  out.market = equilibrium(demand, supply);
  if (desired >= demand.a()) {
    out.transcript = NegotiationTranscript{{}, equilibrium_fallback(demand, supply)};
  } else {
    out.transcript = negotiate_transcript(demand, supply, desired, cfg.negotiation);
  }
  out.quantity = traded_quantity(out.transcript->outcome);
  return out;
}

World::World(SimConfig cfg, MessageSink trace)
    : cfg_(std::move(cfg)), trace_(std::move(trace)), demand_(cfg_.seed, cfg_.mu, cfg_.sigma) {
  cfg_.validate();
  const int n = cfg_.n_tiers;
  const int lead = cfg_.policy.lead_time;
  const AgentId market = market_id(n);

  // Mail is delivered when a period closes and acted on from the next one,
  // so a material delay of L - 1 makes goods shipped in t usable in t + L.
  for (int k = 1; k <= n; ++k) {
    transport_.set_link(k, k - 1, Channel::Control, 0);
    transport_.set_link(k - 1, k, Channel::Control, 0);
    transport_.set_link(k - 1, k, Channel::Material, lead - 1);
    transport_.set_link(market, k, Channel::Control, 0);
  }
  transport_.set_link(n, market, Channel::Material, lead - 1);

  // Start at the fixed point of the policy: the pipeline and the order in
  // flight cover L + 1 periods of mean demand, so on-hand is the safety stock
  // and the inventory position equals the base-stock level for (mu, sigma).
  const double on_order0 = cfg_.mu * static_cast<double>(lead + 1);
  const double on_hand0 = base_stock_level(cfg_.mu, cfg_.sigma, cfg_.policy) - on_order0;
  tiers_.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    TierState& s = tiers_[static_cast<std::size_t>(k - 1)];
    s.k = k;
    s.window = ForecastWindow::prefilled(static_cast<std::size_t>(cfg_.window), cfg_.mu);
    s.on_hand = std::max(0.0, on_hand0);
    s.on_order = on_order0;
    s.arriving = cfg_.mu;
    s.incoming_order = k < n ? cfg_.mu : 0.0;
    for (int j = 1; j < lead; ++j) {
      transport_.send(Message{Performative::Inform, k - 1, k, j - lead, 0, 0, payload::Shipment{cfg_.mu, 0}});
    }
  }
  source_pending_ = cfg_.mu;

  log_.n_tiers = n;
  log_.warmup = cfg_.warmup;
  log_.tiers.assign(static_cast<std::size_t>(n), {});
  log_.in_transit.assign(static_cast<std::size_t>(n + 2), 0.0);
  log_.primed.assign(static_cast<std::size_t>(n + 2), 0.0);
  for (int k = 1; k <= n; ++k) log_.primed[static_cast<std::size_t>(k)] = cfg_.mu * static_cast<double>(lead);
  log_.market_demand.reserve(static_cast<std::size_t>(cfg_.horizon));
  for (auto& series : log_.tiers) series.reserve(static_cast<std::size_t>(cfg_.horizon));
}

void World::send(Performative p, AgentId from, AgentId to, Payload payload) {
  const Message stamped = transport_.send(Message{p, from, to, t_, 0, 0, std::move(payload)});
  if (trace_) trace_(stamped);
}

void World::dispatch(const Message& m) {
  const int n = cfg_.n_tiers;
  if (const auto* ship = std::get_if<payload::Shipment>(&m.payload)) {
    if (m.receiver == market_id(n)) {
      log_.market_received += ship->qty;
    } else {
      tiers_.at(static_cast<std::size_t>(m.receiver - 1)).arriving += ship->qty;
    }
  } else if (const auto* order = std::get_if<payload::Order>(&m.payload)) {
    if (m.receiver == source_id()) {
      source_pending_ += order->qty;
    } else {
      tiers_.at(static_cast<std::size_t>(m.receiver - 1)).incoming_order += order->qty;
    }
  }
  // Bids, replies and broadcasts were acted on within the period they were sent.
}

void World::act(TierState& s, double market_demand) {
  const int n = cfg_.n_tiers;
  const AgentId upstream = s.k - 1;
  const AgentId downstream = s.k == n ? market_id(n) : s.k + 1;
  TierPeriod rec;

  rec.received = s.arriving;
  s.on_hand += s.arriving;
  s.on_order -= s.arriving;
  s.arriving = 0.0;

  const double demand = s.k == n ? market_demand : s.incoming_order;
  s.incoming_order = 0.0;
  rec.demand_in = demand;

  // Backlog is served first; only stock left after it counts as an immediate fill.
  rec.filled_now = std::min(demand, std::max(0.0, s.on_hand - s.backlog));
  const double ship = std::min(s.on_hand, demand + s.backlog);
  s.backlog = snap(s.backlog + demand - ship, cfg_.mu);
  s.on_hand = snap(s.on_hand - ship, cfg_.mu);
  rec.filled = ship;
  if (ship > 0.0) send(Performative::Inform, s.k, downstream, payload::Shipment{ship, 0});

  const bool sees_market = cfg_.scenario == Scenario::Nyop || cfg_.share_market_demand;
  s.window.push(sees_market ? market_demand : demand);

  const double level = base_stock_level(s.window.mean(), s.window.stddev(), cfg_.policy);
  rec.desired = desired_order(s.inventory_position(), level);

  const OrderDecision decision = decide_order(cfg_, rec.desired, s.window);
  if (decision.transcript) {
    for (const BidRound& r : decision.transcript->rounds) {
      send(Performative::Propose, s.k, upstream, payload::Bid{r.bid.quantity, r.bid.price, r.bid.round});
      send(r.accepted ? Performative::AcceptProposal : Performative::RejectProposal, upstream, s.k,
           payload::BidReply{r.accepted, r.bid.quantity, r.accepted ? std::optional(r.bid.price) : std::nullopt});
    }
    const NegotiationOutcome& outcome = decision.transcript->outcome;
    if (const auto* a = std::get_if<Accepted>(&outcome)) rec.unit_price = a->unit_price;
    if (const auto* f = std::get_if<Fallback>(&outcome)) {
      rec.unit_price = f->unit_price;
      rec.fallback = true;
    }
  }
  rec.negotiated = decision.negotiated;
  rec.order = decision.quantity;
  send(decision.negotiated ? Performative::Confirm : Performative::Request, s.k, upstream,
       payload::Order{rec.order});
  s.on_order += rec.order;

  rec.on_hand = s.on_hand;
  rec.backlog = s.backlog;
  rec.inventory_position = s.inventory_position();
  log_.tiers[static_cast<std::size_t>(s.k - 1)].push_back(rec);
}

void World::step() {
  if (done()) throw Error(ErrorKind::InvalidArgument, "horizon reached");
  const int n = cfg_.n_tiers;
  const double d = demand_.next();
  log_.market_demand.push_back(d);

  if (source_pending_ > 0.0) {
    send(Performative::Inform, source_id(), 1, payload::Shipment{source_pending_, 0});
    log_.source_shipped += source_pending_;
  }
  source_pending_ = 0.0;

  const bool broadcast = cfg_.scenario == Scenario::Nyop || cfg_.share_market_demand;
  for (int k = n; k >= 1; --k) {
    if (k == n || broadcast) send(Performative::Inform, market_id(n), k, payload::DemandBroadcast{d});
  }
  for (int k = n; k >= 1; --k) act(tiers_[static_cast<std::size_t>(k - 1)], d);

  for (const Message& m : transport_.deliver(t_)) dispatch(m);
  ++t_;
}

RunLog World::finish() && {
  for (const Message& m : transport_.pending()) {
    if (const auto* ship = std::get_if<payload::Shipment>(&m.payload)) {
      log_.in_transit[static_cast<std::size_t>(m.receiver)] += ship->qty;
    }
  }
  for (const TierState& s : tiers_) log_.in_transit[static_cast<std::size_t>(s.k)] += s.arriving;
  return std::move(log_);
}

RunLog run(const SimConfig& cfg, MessageSink trace) {
  World world(cfg, std::move(trace));
  while (!world.done()) world.step();
  return std::move(world).finish();
}

std::string state_dump_csv(const RunLog& log, int replication, bool header) {
  std::ostringstream out;
  out.precision(17);
  if (header) out << "rep,t,k,demand_in,filled,order,on_hand,backlog\n";
  const std::size_t periods = log.market_demand.size();
  for (std::size_t t = 0; t < periods; ++t) {
    for (int k = log.n_tiers; k >= 1; --k) {
      const TierPeriod& p = log.tier(k)[t];
      out << replication << ',' << t << ',' << k << ',' << p.demand_in << ',' << p.filled << ',' << p.order
          << ',' << p.on_hand << ',' << p.backlog << '\n';
    }
  }
  return out.str();
}

}  // namespace nyopsim
