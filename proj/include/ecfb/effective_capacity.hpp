#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecfb/numerics.hpp"

namespace ecfb {

/// How an EC value was (or should be) computed.
struct EcMethod {
  enum class Kind { series, direct, monte_carlo };

  Kind kind = Kind::direct;
  int truncation_order = 2;     ///< series only
  std::uint64_t samples = 0;    ///< monte_carlo only
  std::uint64_t seed = 0;       ///< monte_carlo only

  static EcMethod series(int order) { return {Kind::series, order, 0, 0}; }
  static EcMethod direct() { return {Kind::direct, 0, 0, 0}; }
  static EcMethod monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {Kind::monte_carlo, 0, samples, seed};
  }

  /// "series:M", "direct" or "mc".
  std::string label() const;
  /// Parses "series:M", "series" (M = 2), "direct" or "mc". Throws DomainError.
  static EcMethod parse(const std::string& text);

  friend bool operator==(const EcMethod&, const EcMethod&) = default;
};

struct EcEvaluation {
  double ec = 0.0;                 ///< bits per channel use
  double epsilon = 0.0;
  EcMethod method;
  double inner_expectation = 1.0;  ///< E[eps + (1-eps) e^{-theta T r}]
  double error_estimate = 0.0;     ///< absolute error bound on inner_expectation
  /// |adaptive - 80-node Gauss-Laguerre| on the inner expectation (direct only).
  double laguerre_discrepancy = 0.0;
};

/// Closed-form series pieces for one (sinr, theta, epsilon, T).
struct SeriesTerms {
  double sinr = 0.0;
  double c = 0.0;   ///< theta sqrt(T) Q^{-1}(eps) log2(e)
  double d = 0.0;   ///< -theta T / ln 2
  int truncation_order = 0;
  /// Term m of the sum: c^m / m! * integral of (1+sinr z)^d x(z)^m e^{-z}.
  std::vector<double> terms;
  double j_value = 0.0;
  double error_estimate = 0.0;

  /// sqrt(1 - (1 + sinr z)^{-2}), the expansion variable.
  double x_of_z(double z) const;
};

/// Delay-outage pair: P(delay >= max_delay) ~ outage_probability.
struct QosTarget {
  double outage_probability = 1e-3;
  double max_delay = 0.0;  ///< symbol periods; 0 means "derive from EC"

  void validate() const;
};

/// Quadrature tolerance used inside EC evaluation. Tighter than the outer
/// searches so that quadrature noise never steers a golden-section step.
inline constexpr Tolerance kInnerQuadrature{1e-12, 1e-10, 4000};

/// Bracket of the error-probability search.
inline constexpr double kEpsilonLo = 1e-7;
inline constexpr double kEpsilonHi = 0.999;
/// Outer tolerance on epsilon for optimum searches.
inline constexpr Tolerance kEpsilonSearch{1e-6, 1e-6, 200};

SeriesTerms series_terms(double sinr, double theta, double epsilon, int blocklength,
                         int truncation_order, const Tolerance& quad = kInnerQuadrature);

/// EC by direct quadrature of the expectation over the fading power.
EcEvaluation ec_direct(double sinr, double theta, double epsilon, int blocklength,
                       const Tolerance& quad = kInnerQuadrature);

/// EC by the truncated series with M + 1 terms.
EcEvaluation ec_series(double sinr, double theta, double epsilon, int blocklength,
                       int truncation_order, const Tolerance& quad = kInnerQuadrature);

/// Dispatches to ec_series / ec_direct / ec_monte_carlo.
EcEvaluation ec_evaluate(double sinr, double theta, double epsilon, int blocklength,
                         const EcMethod& method);

struct OptimalEpsilon {
  double epsilon_star = 0.0;
  double ec_max = 0.0;
  /// The optimum sits on the search bracket, i.e. EC is monotone in epsilon.
  bool degenerate = false;
  EcEvaluation evaluation;
};

/// EC-maximizing error probability over [kEpsilonLo, kEpsilonHi].
/// method must be series or direct.
OptimalEpsilon optimal_epsilon(double sinr, double theta, int blocklength,
                               const EcMethod& method = EcMethod::direct(),
                               const Tolerance& search = kEpsilonSearch);

/// exp(-theta * ec * max_delay).
double delay_outage(double ec, double theta, double max_delay);

/// Largest delay bound (symbol periods) met with the given outage probability.
double max_delay(double ec, double theta, double outage_probability);

}  // namespace ecfb
