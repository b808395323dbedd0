#include "hpdwav/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hpdwav {

namespace {

constexpr double kShift = 10.0;

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("argument must be positive and finite");
}

}  // namespace

double digamma(double x) {
  require_positive(x);
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  // Asymptotic series with Bernoulli numbers B_2..B_14.
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  require_positive(x);
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6))))));
  return acc + 1.0 / x + 0.5 * r + series / x;
}

double wishart_trace_variance(int d, int b) {
  if (d < 1 || b < d) throw std::invalid_argument("need 1 <= d <= B");
  double v = 0.0;
  for (int i = 1; i <= d; ++i) v += trigamma(static_cast<double>(b - d + i));
  return v;
}

double wishart_bias_factor(int d, int b) {
  if (d < 1 || b < d) throw std::invalid_argument("need 1 <= d <= B");
  double s = 0.0;
  for (int i = 1; i <= d; ++i) s += digamma(static_cast<double>(b - d + i));
  return std::exp(std::log(static_cast<double>(b)) - s / d);
}

}  // namespace hpdwav
