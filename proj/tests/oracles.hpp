#pragma once

// Test-only reference computations. None of these share code paths with
// the library kernels they check.

#include <cmath>
#include <functional>
#include <numbers>

namespace ecfb::oracle {

/// Composite trapezoid for the integral of f(z) e^{-z} over [0, z_max] on the
/// graded mesh z = z_max * t^3, which resolves boundary layers at z = 0.
/// The truncated tail is below sup|f| * e^{-z_max}.
inline double trapezoid_exp_weighted(const std::function<double(double)>& f,
                                     double z_max = 60.0, int panels = 200000) {
  auto g = [&](double t) {
    const double z = z_max * t * t * t;
    return f(z) * std::exp(-z) * 3.0 * z_max * t * t;
  };
  double sum = 0.5 * (g(0.0) + g(1.0));
  for (int i = 1; i < panels; ++i) sum += g(static_cast<double>(i) / panels);
  return sum / panels;
}

/// Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

/// Upper normal tail by Simpson integration of the density over [t, t + 40].
inline double normal_tail(double t) {
  const double c = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return simpson([c](double u) { return c * std::exp(-0.5 * u * u); }, t, t + 40.0, 400000);
}

/// Plain bisection for a decreasing function crossing `level` on [lo, hi].
inline double bisect_decreasing(const std::function<double(double)>& f, double level, double lo,
                                double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Normal-approximation rate written out independently of the library.
inline double rate(double sinr, double z, int blocklength, double q_inv) {
  const double g = 1.0 + sinr * z;
  return std::log2(g) - std::sqrt((1.0 - 1.0 / (g * g)) / blocklength) * q_inv / std::log(2.0);
}

/// Inner EC expectation by trapezoid quadrature.
inline double inner_expectation(double sinr, double theta, double epsilon, int blocklength,
                                double q_inv) {
  return trapezoid_exp_weighted([&](double z) {
    return epsilon + (1.0 - epsilon) * std::exp(-theta * blocklength * rate(sinr, z, blocklength, q_inv));
  });
}

}  // namespace ecfb::oracle
