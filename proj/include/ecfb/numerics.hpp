#pragma once

#include <functional>

#include <Eigen/Core>

namespace ecfb {

/// Termination control shared by the numerical kernels.
struct Tolerance {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_iter = 200;

  /// Throws DomainError if any field violates its invariant.
  void validate() const;
};

using ScalarFunction = std::function<double(double)>;

/// Upper tail of the standard normal, Q(t) = P(X > t).
double gaussian_q(double t);

/// Inverse of gaussian_q on the open interval (0, 1).
///
/// Starts from a rational approximation of the normal quantile and polishes
/// with Newton steps on gaussian_q itself, so the round trip is limited only
/// by the accuracy of erfc.
double gaussian_q_inv(double p);

/// Standard normal density.
double gaussian_pdf(double t);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

/// Computes the integral of f(z) e^{-z} over [0, inf).
///
/// Adaptive Gauss-Kronrod 7/15 over geometrically growing panels that start
/// fine near z = 0 (where finite-blocklength integrands have a boundary
/// layer) and end at z = 1024, beyond which e^{-z} underflows. The worst
/// panel is bisected until the summed error estimate falls below
/// max(abs_tol, rel_tol * |value|). tol.max_iter bounds the number of
/// bisections; exceeding it throws NumericError with the current estimate.
QuadratureResult integrate_exp_weighted(const ScalarFunction& f, const Tolerance& tol = {});

/// n-point Gauss-Laguerre rule for the weight e^{-z} on [0, inf).
/// Nodes and weights come from the Golub-Welsch eigenproblem.
class GaussLaguerreRule {
 public:
  explicit GaussLaguerreRule(int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double integrate(const ScalarFunction& f) const;

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Shared 80-node rule used for quadrature cross-checks.
const GaussLaguerreRule& default_laguerre_rule();

struct ScalarMinimum {
  double argmin = 0.0;
  double min = 0.0;
  int iterations = 0;
  /// argmin lies within abs_tol of lo or hi.
  bool at_boundary = false;
};

/// Golden-section search for the minimizer of a unimodal f on [lo, hi].
/// Endpoints are compared against the interior estimate, so monotone
/// functions return the exact boundary.
ScalarMinimum minimize_scalar_convex(const ScalarFunction& f, double lo, double hi,
                                     const Tolerance& tol = {});

/// Bisection for a monotone f with f(lo) * f(hi) <= 0.
double find_root_monotone(const ScalarFunction& f, double lo, double hi,
                          const Tolerance& tol = {});

}  // namespace ecfb
