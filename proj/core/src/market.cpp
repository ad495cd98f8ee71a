#include "nyopsim/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nyopsim/error.hpp"

namespace nyopsim {

void MarketCalibration::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidCalibration, why); };
  if (!std::isfinite(p_star) || p_star <= 0.0) fail("p_star must be > 0");
  if (!std::isfinite(q_star) || q_star <= 0.0) fail("q_star must be > 0");
  if (!std::isfinite(e_d) || e_d >= 0.0) fail("demand elasticity must be < 0");
  if (!std::isfinite(e_s) || e_s <= 0.0) fail("supply elasticity must be > 0");
}

DemandCurve::DemandCurve(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidArgument, "demand curve needs a > 0 and b > 0");
  }
}

double DemandCurve::quantity(double price) const noexcept { return std::max(0.0, a_ - b_ * price); }

double DemandCurve::valuation(double quantity) const {
  if (quantity >= a_) {
    throw Error(ErrorKind::QuantityExceedsIntercept,
                "quantity " + std::to_string(quantity) + " >= intercept " + std::to_string(a_));
  }
  return (a_ - quantity) / b_;
}

SupplyCurve::SupplyCurve(double c, double d) : c_(c), d_(d) {
  if (!(d > 0.0) || !std::isfinite(c) || !std::isfinite(d)) {
    throw Error(ErrorKind::InvalidArgument, "supply curve needs d > 0");
  }
}

double SupplyCurve::quantity(double price) const noexcept { return std::max(0.0, c_ + d_ * price); }

double SupplyCurve::threshold(double quantity) const noexcept { return (quantity - c_) / d_; }

DemandCurve calibrate_demand(const MarketCalibration& cal) {
  cal.validate();
  const double b = -cal.e_d * cal.q_star / cal.p_star;
  return {cal.q_star + b * cal.p_star, b};
}

SupplyCurve calibrate_supply(const MarketCalibration& cal) {
  cal.validate();
  const double d = cal.e_s * cal.q_star / cal.p_star;
  return {cal.q_star - d * cal.p_star, d};
}

double demand_quantity(const DemandCurve& curve, double price) { return curve.quantity(price); }

double bid_price_for(const DemandCurve& curve, double quantity) { return curve.valuation(quantity); }

double min_price_for(const SupplyCurve& curve, double quantity) { return curve.threshold(quantity); }

MarketPoint equilibrium(const DemandCurve& demand, const SupplyCurve& supply) {
  const double slope = demand.b() + supply.d();
  if (!(slope > 0.0)) throw Error(ErrorKind::DegenerateCurves, "b + d must be > 0");
  const double price = (demand.a() - supply.c()) / slope;
  return {price, demand.a() - demand.b() * price};
}

}  // namespace nyopsim
