#include "nyopsim/policy.hpp"

#include <algorithm>
#include <cmath>

namespace nyopsim {

double base_stock_level(double mu_hat, double sigma_hat, const PolicyParams& p) {
  const double cover = static_cast<double>(p.lead_time) + 1.0;
  return mu_hat * cover + p.safety_factor * sigma_hat * std::sqrt(cover);
}

double desired_order(double inventory_position, double base_stock) {
  return std::max(0.0, base_stock - inventory_position);
}

}  // namespace nyopsim
