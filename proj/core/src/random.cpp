#include "nyopsim/random.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/erf.hpp>

#include "nyopsim/error.hpp"

namespace nyopsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

double standard_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile needs u in (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

DemandStream::DemandStream(std::uint64_t seed, double mu, double sigma)
    : engine_(seed), mu_(mu), sigma_(sigma) {
  if (!(sigma >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be >= 0");
}

double DemandStream::next() {
  // 53 random bits centred in their cell, so u is never 0 or 1.
  const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  ++draws_;
  if (sigma_ == 0.0) return std::max(0.0, mu_);
  return std::max(0.0, mu_ + sigma_ * standard_normal_quantile(u));
}

}  // namespace nyopsim
