#pragma once

#include <cstddef>
#include <deque>
#include <initializer_list>
#include <span>
#include <vector>

namespace nyopsim {

/// Sliding window over the most recent `capacity` demand observations.
class ForecastWindow {
 public:
  explicit ForecastWindow(std::size_t capacity);
  ForecastWindow(std::size_t capacity, std::span<const double> initial);
  ForecastWindow(std::size_t capacity, std::initializer_list<double> initial);

  /// Window holding `capacity` copies of `prior_mean`.
  static ForecastWindow prefilled(std::size_t capacity, double prior_mean);

  void push(double observation);

  /// Arithmetic mean. Throws Error{EmptyWindow}.
  double mean() const;
  /// Sample standard deviation (n - 1). Throws Error{InsufficientData} below 2 observations.
  double stddev() const;

  std::size_t size() const noexcept { return obs_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::vector<double> observations() const { return {obs_.begin(), obs_.end()}; }

  bool operator==(const ForecastWindow&) const = default;

 private:
  std::size_t capacity_;
  std::deque<double> obs_;
};

inline double ma_mean(const ForecastWindow& w) { return w.mean(); }
inline double ma_std(const ForecastWindow& w) { return w.stddev(); }

}  // namespace nyopsim
