#pragma once

#include <variant>
#include <vector>

#include "nyopsim/market.hpp"

namespace nyopsim {

struct Bid {
  double quantity = 0.0;
  double price = 0.0;
  int round = 1;  // 1-based
};

/// Buyer concession schedule: the first bid is `opening_fraction` of the
/// valuation, rising linearly to the full valuation at `max_rounds`.
struct NegotiationConfig {
  int max_rounds = 3;
  double opening_fraction = 0.9;

  void validate() const;
};

struct Accepted {
  double quantity;
  double unit_price;
  int rounds_used;
  bool operator==(const Accepted&) const = default;
};

/// All rounds rejected; trade the curves' equilibrium quantity at the
/// equilibrium price instead.
struct Fallback {
  double quantity;
  double unit_price;
  bool operator==(const Fallback&) const = default;
};

struct Failed {
  bool operator==(const Failed&) const = default;
};

using NegotiationOutcome = std::variant<Accepted, Fallback, Failed>;

/// Quantity actually traded (0 for Failed).
double traded_quantity(const NegotiationOutcome& outcome) noexcept;

/// Per-round record of a negotiation, as exchanged between buyer and seller.
struct BidRound {
  Bid bid;
  double threshold;
  bool accepted;
};

struct NegotiationTranscript {
  std::vector<BidRound> rounds;
  NegotiationOutcome outcome;
};

/// NYOP acceptance rule: accept iff the bid meets the concealed threshold
/// (ties accepted). The buyer pays its own bid.
bool match(const Bid& bid, double threshold);

/// Bid price for `round` given the buyer's valuation.
/// Throws Error{RoundOutOfRange} unless 1 <= round <= cfg.max_rounds.
double bid_schedule(double valuation, const NegotiationConfig& cfg, int round);

NegotiationTranscript negotiate_transcript(const DemandCurve& demand, const SupplyCurve& supply,
                                           double desired_qty, const NegotiationConfig& cfg);

NegotiationOutcome negotiate(const DemandCurve& demand, const SupplyCurve& supply,
                             double desired_qty, const NegotiationConfig& cfg);

/// Outcome when no bid is feasible: the equilibrium trade, or Failed if the
/// curves do not cross at a positive price and quantity.
NegotiationOutcome equilibrium_fallback(const DemandCurve& demand, const SupplyCurve& supply);

}  // namespace nyopsim
