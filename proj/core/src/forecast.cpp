#include "nyopsim/forecast.hpp"

#include <cmath>
#include <numeric>

#include "nyopsim/error.hpp"

namespace nyopsim {

ForecastWindow::ForecastWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorKind::InvalidArgument, "window capacity must be > 0");
}

ForecastWindow::ForecastWindow(std::size_t capacity, std::span<const double> initial)
    : ForecastWindow(capacity) {
  for (double x : initial) push(x);
}

ForecastWindow::ForecastWindow(std::size_t capacity, std::initializer_list<double> initial)
    : ForecastWindow(capacity, std::span<const double>(initial.begin(), initial.size())) {}

ForecastWindow ForecastWindow::prefilled(std::size_t capacity, double prior_mean) {
  ForecastWindow w(capacity);
  w.obs_.assign(capacity, prior_mean);
  return w;
}

void ForecastWindow::push(double observation) {
  if (!(observation >= 0.0)) throw Error(ErrorKind::InvalidArgument, "demand observation must be >= 0");
  obs_.push_back(observation);
  while (obs_.size() > capacity_) obs_.pop_front();
}

double ForecastWindow::mean() const {
  if (obs_.empty()) throw Error(ErrorKind::EmptyWindow, "no observations");
  return std::accumulate(obs_.begin(), obs_.end(), 0.0) / static_cast<double>(obs_.size());
}

double ForecastWindow::stddev() const {
  if (obs_.size() < 2) throw Error(ErrorKind::InsufficientData, "need at least two observations");
  const double m = mean();
  double ss = 0.0;
  for (double x : obs_) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(obs_.size() - 1));
}

}  // namespace nyopsim
