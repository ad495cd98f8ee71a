#pragma once

#include <cstdint>
#include <random>

namespace nyopsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive combination of several integers into one 64-bit seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

/// Inverse of the standard normal CDF for u in (0, 1).
double standard_normal_quantile(double u);

/// Normal(mu, sigma) demand truncated below at 0, drawn by inverse-CDF from a
/// 64-bit Mersenne Twister. Deterministic for a given seed and draw index.
class DemandStream {
 public:
  DemandStream(std::uint64_t seed, double mu, double sigma);

  double next();
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::mt19937_64 engine_;
  double mu_;
  double sigma_;
  std::uint64_t draws_ = 0;
};

}  // namespace nyopsim
