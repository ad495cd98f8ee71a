#include "nyopsim/negotiation.hpp"

#include <cmath>
#include <string>

#include "nyopsim/error.hpp"

namespace nyopsim {

void NegotiationConfig::validate() const {
  if (max_rounds < 1) throw Error(ErrorKind::ConfigInvalid, "max_rounds must be >= 1");
  if (!(opening_fraction > 0.0 && opening_fraction <= 1.0)) {
    throw Error(ErrorKind::ConfigInvalid, "opening_fraction must lie in (0, 1]");
  }
}

double traded_quantity(const NegotiationOutcome& outcome) noexcept {
  if (const auto* a = std::get_if<Accepted>(&outcome)) return a->quantity;
  if (const auto* f = std::get_if<Fallback>(&outcome)) return f->quantity;
  return 0.0;
}

bool match(const Bid& bid, double threshold) { return bid.price >= threshold; }

double bid_schedule(double valuation, const NegotiationConfig& cfg, int round) {
  if (round < 1 || round > cfg.max_rounds) {
    throw Error(ErrorKind::RoundOutOfRange,
                "round " + std::to_string(round) + " outside 1.." + std::to_string(cfg.max_rounds));
  }
  if (cfg.max_rounds == 1 || round == cfg.max_rounds) return valuation;
  const double progress = static_cast<double>(round - 1) / static_cast<double>(cfg.max_rounds - 1);
  const double beta = cfg.opening_fraction;
  return valuation * (beta + (1.0 - beta) * progress);
}

NegotiationOutcome equilibrium_fallback(const DemandCurve& demand, const SupplyCurve& supply) {
  const MarketPoint eq = equilibrium(demand, supply);
  if (!(eq.price > 0.0) || !(eq.quantity > 0.0)) return Failed{};
  return Fallback{eq.quantity, eq.price};
}

NegotiationTranscript negotiate_transcript(const DemandCurve& demand, const SupplyCurve& supply,
                                           double desired_qty, const NegotiationConfig& cfg) {
  cfg.validate();
  if (!(desired_qty > 0.0)) throw Error(ErrorKind::InvalidArgument, "desired quantity must be > 0");

  const double valuation = bid_price_for(demand, desired_qty);
  const double threshold = min_price_for(supply, desired_qty);

  NegotiationTranscript transcript{{}, Failed{}};
  transcript.rounds.reserve(static_cast<std::size_t>(cfg.max_rounds));
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const Bid bid{desired_qty, bid_schedule(valuation, cfg, round), round};
    const bool accepted = match(bid, threshold);
    transcript.rounds.push_back({bid, threshold, accepted});
    if (accepted) {
      transcript.outcome = Accepted{desired_qty, bid.price, round};
      return transcript;
    }
  }
  transcript.outcome = equilibrium_fallback(demand, supply);
  return transcript;
}

NegotiationOutcome negotiate(const DemandCurve& demand, const SupplyCurve& supply, double desired_qty,
                             const NegotiationConfig& cfg) {
  return negotiate_transcript(demand, supply, desired_qty, cfg).outcome;
}

}  // namespace nyopsim
