#include "ecfb/effective_capacity.hpp"

#include <cmath>
#include <numbers>

#include "ecfb/channel.hpp"
#include "ecfb/errors.hpp"
#include "ecfb/montecarlo.hpp"

namespace ecfb {

std::string EcMethod::label() const {
  switch (kind) {
    case Kind::series:
      return "series:" + std::to_string(truncation_order);
    case Kind::direct:
      return "direct";
    case Kind::monte_carlo:
      return "mc";
  }
  return "unknown";
}

EcMethod EcMethod::parse(const std::string& text) {
  if (text == "direct") return direct();
  if (text == "mc" || text == "monte_carlo") return monte_carlo(1'000'000, 42);
  if (text == "series") return series(2);
  if (text.rfind("series:", 0) == 0) {
    const std::string order = text.substr(7);
    std::size_t used = 0;
    int m = -1;
    try {
      m = std::stoi(order, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != order.size() || order.empty() || m < 0) {
      throw DomainError("method: series order must be a non-negative integer, got '" + order + "'");
    }
    return series(m);
  }
  throw DomainError("method: expected series:M, direct or mc, got '" + text + "'");
}

void QosTarget::validate() const {
  if (!(outage_probability > 0.0 && outage_probability < 1.0)) {
    throw DomainError("qos.outage_probability: must lie in (0, 1)");
  }
  if (!(max_delay >= 0.0) || !std::isfinite(max_delay)) {
    throw DomainError("qos.max_delay: must be finite and >= 0");
  }
}

namespace {

void check_common(double sinr, double theta, double epsilon, int blocklength) {
  if (!(sinr > 0.0) || !std::isfinite(sinr)) throw DomainError("sinr: must be finite and > 0");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta: must be finite and > 0");
  if (blocklength < 1) throw DomainError("blocklength: must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon: must lie in [0, 1]");
  if (epsilon == 0.0) {
    throw DomainError("epsilon: 0 is outside the domain (Q^{-1}(0) is unbounded)");
  }
}

double ec_from_inner(double inner, double theta, int blocklength) {
  return -std::log(inner) / (blocklength * theta);
}

}  // namespace

double SeriesTerms::x_of_z(double z) const {
  const double g = sinr * z;
  const double one_plus = 1.0 + g;
  return std::sqrt(g * (2.0 + g)) / one_plus;
}

SeriesTerms series_terms(double sinr, double theta, double epsilon, int blocklength,
                         int truncation_order, const Tolerance& quad) {
  if (truncation_order < 0) throw DomainError("truncation_order: must be >= 0");
  check_common(sinr, theta, epsilon, blocklength);
  if (epsilon >= 1.0) throw DomainError("series_terms: epsilon must be < 1");

  SeriesTerms out;
  out.sinr = sinr;
  out.truncation_order = truncation_order;
  out.c = theta * std::sqrt(static_cast<double>(blocklength)) * gaussian_q_inv(epsilon) *
          std::numbers::log2e;
  out.d = -theta * blocklength / std::numbers::ln2;

  double coefficient = 1.0;  // c^m / m!
  for (int m = 0; m <= truncation_order; ++m) {
    if (m > 0) coefficient *= out.c / m;
    if (coefficient == 0.0) {
      out.terms.push_back(0.0);
      continue;
    }
    const auto integral = integrate_exp_weighted(
        [&](double z) {
          const double power = std::exp(out.d * std::log1p(sinr * z));
          return m == 0 ? power : power * std::pow(out.x_of_z(z), m);
        },
        quad);
    out.terms.push_back(coefficient * integral.value);
    out.error_estimate += std::abs(coefficient) * integral.error_estimate;
  }
  for (double t : out.terms) out.j_value += t;
  return out;
}

EcEvaluation ec_direct(double sinr, double theta, double epsilon, int blocklength,
                       const Tolerance& quad) {
  check_common(sinr, theta, epsilon, blocklength);
  EcEvaluation out;
  out.epsilon = epsilon;
  out.method = EcMethod::direct();
  if (epsilon == 1.0) return out;

  const double q_inv = gaussian_q_inv(epsilon);
  const double scale = theta * blocklength;
  // (1-eps)(e^{-theta T r} - 1); the inner expectation is 1 + its mean.
  auto excess = [&](double z) {
    return (1.0 - epsilon) * std::expm1(-scale * fb_rate_with_qinv(sinr, z, blocklength, q_inv));
  };
  const auto integral = integrate_exp_weighted(excess, quad);
  const double laguerre = default_laguerre_rule().integrate(excess);

  out.inner_expectation = 1.0 + integral.value;
  out.error_estimate = integral.error_estimate;
  out.laguerre_discrepancy = std::abs(laguerre - integral.value);
  out.ec = -std::log1p(integral.value) / scale;
  return out;
}

EcEvaluation ec_series(double sinr, double theta, double epsilon, int blocklength,
                       int truncation_order, const Tolerance& quad) {
  if (truncation_order < 0) throw DomainError("truncation_order: must be >= 0");
  check_common(sinr, theta, epsilon, blocklength);
  EcEvaluation out;
  out.epsilon = epsilon;
  out.method = EcMethod::series(truncation_order);
  if (epsilon == 1.0) return out;

  const auto terms = series_terms(sinr, theta, epsilon, blocklength, truncation_order, quad);
  out.inner_expectation = epsilon + (1.0 - epsilon) * terms.j_value;
  out.error_estimate = (1.0 - epsilon) * terms.error_estimate;
  out.ec = ec_from_inner(out.inner_expectation, theta, blocklength);
  return out;
}

EcEvaluation ec_evaluate(double sinr, double theta, double epsilon, int blocklength,
                         const EcMethod& method) {
  switch (method.kind) {
    case EcMethod::Kind::series:
      return ec_series(sinr, theta, epsilon, blocklength, method.truncation_order);
    case EcMethod::Kind::direct:
      return ec_direct(sinr, theta, epsilon, blocklength);
    case EcMethod::Kind::monte_carlo:
      return ec_monte_carlo(sinr, theta, epsilon, blocklength, method.samples, method.seed)
          .evaluation;
  }
  throw DomainError("ec_evaluate: unknown method");
}

OptimalEpsilon optimal_epsilon(double sinr, double theta, int blocklength, const EcMethod& method,
                               const Tolerance& search) {
  if (method.kind == EcMethod::Kind::monte_carlo) {
    throw DomainError("optimal_epsilon: method must be series or direct");
  }
  check_common(sinr, theta, 0.5, blocklength);

  // Minimizing the inner expectation maximizes EC.
  auto inner = [&](double eps) {
    return ec_evaluate(sinr, theta, eps, blocklength, method).inner_expectation;
  };
  const auto minimum = minimize_scalar_convex(inner, kEpsilonLo, kEpsilonHi, search);

  OptimalEpsilon out;
  out.epsilon_star = minimum.argmin;
  out.degenerate = minimum.at_boundary;
  out.evaluation = ec_evaluate(sinr, theta, minimum.argmin, blocklength, method);
  out.ec_max = out.evaluation.ec;
  return out;
}

double delay_outage(double ec, double theta, double max_delay) {
  if (!(ec >= 0.0) || !std::isfinite(ec)) throw DomainError("delay_outage: ec must be >= 0");
  if (!(theta > 0.0)) throw DomainError("delay_outage: theta must be > 0");
  if (!(max_delay >= 0.0)) throw DomainError("delay_outage: max_delay must be >= 0");
  return std::exp(-theta * ec * max_delay);
}

double max_delay(double ec, double theta, double outage_probability) {
  if (!(ec > 0.0) || !std::isfinite(ec)) throw DomainError("max_delay: ec must be > 0");
  if (!(theta > 0.0)) throw DomainError("max_delay: theta must be > 0");
  if (!(outage_probability > 0.0 && outage_probability < 1.0)) {
    throw DomainError("max_delay: outage probability must lie in (0, 1)");
  }
  return -std::log(outage_probability) / (theta * ec);
}

}  // namespace ecfb
