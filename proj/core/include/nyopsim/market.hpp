#pragma once

#include <utility>

namespace nyopsim {

/// Equilibrium point and price elasticities from which both linear curves
/// are derived.
struct MarketCalibration {
  double p_star = 100.0;  ///< equilibrium price
  double q_star = 100.0;  ///< equilibrium quantity per period
  double e_d = -0.75;     ///< price elasticity of demand, < 0
  double e_s = 1.56;      ///< price elasticity of supply, > 0

  /// Throws Error{InvalidCalibration} when an invariant does not hold.
  void validate() const;
};

/// Q_d(P) = a - b P with a, b > 0. Describes the buyer's bidding behaviour.
class DemandCurve {
 public:
  DemandCurve(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// max(0, a - b p)
  double quantity(double price) const noexcept;

  /// Maximum willingness to pay for `quantity`, (a - q) / b.
  /// Throws Error{QuantityExceedsIntercept} if quantity >= a.
  double valuation(double quantity) const;

  bool operator==(const DemandCurve&) const = default;

 private:
  double a_;
  double b_;
};

/// Q_s(P) = max(0, c + d P) with d > 0. The intercept c may be negative.
class SupplyCurve {
 public:
  SupplyCurve(double c, double d);

  double c() const noexcept { return c_; }
  double d() const noexcept { return d_; }

  double quantity(double price) const noexcept;

  /// Seller's concealed threshold price for supplying `quantity`, (q - c) / d.
  double threshold(double quantity) const noexcept;

  bool operator==(const SupplyCurve&) const = default;

 private:
  double c_;
  double d_;
};

struct MarketPoint {
  double price;
  double quantity;
};

DemandCurve calibrate_demand(const MarketCalibration& cal);
SupplyCurve calibrate_supply(const MarketCalibration& cal);

double demand_quantity(const DemandCurve& curve, double price);
double bid_price_for(const DemandCurve& curve, double quantity);
double min_price_for(const SupplyCurve& curve, double quantity);

/// Crossing point of the two curves. Throws Error{DegenerateCurves} when
/// b + d <= 0.
MarketPoint equilibrium(const DemandCurve& demand, const SupplyCurve& supply);

}  // namespace nyopsim
