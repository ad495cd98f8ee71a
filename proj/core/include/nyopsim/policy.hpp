#pragma once

namespace nyopsim {

struct PolicyParams {
  int lead_time = 1;           // L, periods
  double safety_factor = 1.0;  // z
};

// S = mu_hat (L + 1) + z sigma_hat sqrt(L + 1)
double base_stock_level(double mu_hat, double sigma_hat, const PolicyParams& p);

// max(0, S - inventory_position); orders are never negative.
double desired_order(double inventory_position, double base_stock);

}  // namespace nyopsim
