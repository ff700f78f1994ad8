#include "ecfb/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ecfb/errors.hpp"

namespace ecfb {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("tolerance: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("tolerance: rel_tol must be > 0");
  if (max_iter < 1) throw DomainError("tolerance: max_iter must be >= 1");
}

double gaussian_q(double t) {
  if (!std::isfinite(t)) throw DomainError("gaussian_q: argument must be finite");
  return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

double gaussian_pdf(double t) {
  constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return inv_sqrt_2pi * std::exp(-0.5 * t * t);
}

namespace {

// Rational approximation of the standard normal quantile (relative error
// about 1e-9), used only as the Newton starting point.
double normal_quantile_guess(double p) {
  constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
  constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double gaussian_q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gaussian_q_inv: probability must lie in (0, 1)");
  if (p > 0.5) return -gaussian_q_inv(1.0 - p);
  if (p == 0.5) return 0.0;

  // Q^{-1}(p) = -Phi^{-1}(p); p < 0.5 so t > 0.
  double t = -normal_quantile_guess(p);
  for (int i = 0; i < 4; ++i) {
    const double step = (gaussian_q(t) - p) / gaussian_pdf(t);
    t += step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

// One 15-point Kronrod panel with the QUADPACK error heuristic.
template <typename G>
Segment kronrod15(const G& g, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double res_g = fc * kGaussWeights[3];
  double res_k = fc * kKronrodWeights[7];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kKronrodWeights[j] * sum;
    res_abs += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kGaussWeights[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  res_asc *= std::abs(half);
  res_abs *= std::abs(half);

  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return {a, b, res_k * half, err};
}

constexpr std::array<double, 16> kPanelBreaks{0.0,  1.0 / 256, 1.0 / 64, 1.0 / 16, 0.25, 1.0,
                                              2.0,  4.0,       8.0,      16.0,     32.0, 64.0,
                                              128., 256.,      512.,     1024.};

}  // namespace

QuadratureResult integrate_exp_weighted(const ScalarFunction& f, const Tolerance& tol) {
  tol.validate();
  int evaluations = 0;
  auto g = [&](double z) {
    const double w = std::exp(-z);
    if (w == 0.0) return 0.0;
    ++evaluations;
    const double v = f(z) * w;
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate_exp_weighted: integrand not finite at z = " << z;
      throw NumericError(msg.str(), std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::infinity());
    }
    return v;
  };

  auto worse = [](const Segment& x, const Segment& y) { return x.error < y.error; };
  std::vector<Segment> heap;
  heap.reserve(kPanelBreaks.size() + 2 * static_cast<std::size_t>(tol.max_iter));
  for (std::size_t i = 0; i + 1 < kPanelBreaks.size(); ++i) {
    heap.push_back(kronrod15(g, kPanelBreaks[i], kPanelBreaks[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end(), worse);

  auto totals = [&heap] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& s : heap) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  int subdivisions = 0;
  while (error > std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
    if (subdivisions >= tol.max_iter) {
      throw NumericError("integrate_exp_weighted: refinement budget exhausted", value, error);
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericError("integrate_exp_weighted: panel reached roundoff width", value, error);
    }
    heap.push_back(kronrod15(g, worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(kronrod15(g, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), worse);
    ++subdivisions;
    std::tie(value, error) = totals();
  }
  return {value, error, evaluations, subdivisions};
}

GaussLaguerreRule::GaussLaguerreRule(int n) {
  if (n < 1) throw DomainError("GaussLaguerreRule: order must be >= 1");
  // Jacobi matrix of the Laguerre recurrence: diagonal 2k+1, off-diagonal k.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = 2.0 * k + 1.0;
    if (k + 1 < n) {
      jacobi(k, k + 1) = k + 1.0;
      jacobi(k + 1, k) = k + 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw NumericError("GaussLaguerreRule: eigen decomposition failed", 0.0, 0.0);
  }
  nodes_ = solver.eigenvalues();
  weights_ = solver.eigenvectors().row(0).transpose().array().square();
}

double GaussLaguerreRule::integrate(const ScalarFunction& f) const {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < nodes_.size(); ++k) sum += weights_[k] * f(nodes_[k]);
  return sum;
}

const GaussLaguerreRule& default_laguerre_rule() {
  static const GaussLaguerreRule rule(80);
  return rule;
}

ScalarMinimum minimize_scalar_convex(const ScalarFunction& f, double lo, double hi,
                                     const Tolerance& tol) {
  tol.validate();
  if (!(lo < hi)) throw DomainError("minimize_scalar_convex: requires lo < hi");

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int iterations = 0;
  while (b - a > 2.0 * tol.abs_tol) {
    if (iterations >= tol.max_iter) {
      throw NumericError("minimize_scalar_convex: iteration limit reached", 0.5 * (a + b),
                         0.5 * (b - a));
    }
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++iterations;
  }

  ScalarMinimum best{x1, f1, iterations, false};
  if (f2 < best.min) best = {x2, f2, iterations, false};
  const double f_lo = f(lo);
  if (f_lo < best.min) best = {lo, f_lo, iterations, false};
  const double f_hi = f(hi);
  if (f_hi < best.min) best = {hi, f_hi, iterations, false};
  best.at_boundary = best.argmin - lo <= tol.abs_tol || hi - best.argmin <= tol.abs_tol;
  return best;
}

double find_root_monotone(const ScalarFunction& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  if (!(lo < hi)) throw DomainError("find_root_monotone: requires lo < hi");

  double f_lo = f(lo);
  if (std::abs(f_lo) <= tol.abs_tol) return lo;
  const double f_hi = f(hi);
  if (std::abs(f_hi) <= tol.abs_tol) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream msg;
    msg << "find_root_monotone: no sign change on [" << lo << ", " << hi << "] (f = " << f_lo
        << ", " << f_hi << ")";
    throw BracketError(msg.str(), lo, hi);
  }

  double a = lo;
  double b = hi;
  for (int iterations = 0; b - a > tol.abs_tol; ++iterations) {
    if (iterations >= tol.max_iter) {
      throw NumericError("find_root_monotone: iteration limit reached", 0.5 * (a + b),
                         0.5 * (b - a));
    }
    const double mid = 0.5 * (a + b);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol.abs_tol) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      a = mid;
      f_lo = f_mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace ecfb
