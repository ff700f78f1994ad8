#include "ecfb/channel.hpp"

#include <cmath>
#include <numbers>

#include "ecfb/errors.hpp"
#include "ecfb/numerics.hpp"

namespace ecfb {

void NetworkScenario::validate() const {
  if (n_nodes < 1) throw DomainError("n_nodes: must be >= 1");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr: must be finite and > 0");
  if (blocklength < 1) throw DomainError("blocklength: must be >= 1");
  if (!(delay_exponent > 0.0) || !std::isfinite(delay_exponent)) {
    throw DomainError("delay_exponent: must be finite and > 0");
  }
}

std::vector<std::string> NetworkScenario::warnings() const {
  std::vector<std::string> out;
  if (blocklength < 100) {
    out.emplace_back("blocklength below 100 symbols: the normal approximation of the rate is loose");
  }
  return out;
}

double sinr_general(double snr, double interference_envelope_sum) {
  if (!(snr > 0.0)) throw DomainError("sinr_general: snr must be > 0");
  if (!(interference_envelope_sum >= 0.0)) {
    throw DomainError("sinr_general: interference sum must be >= 0");
  }
  return snr / (1.0 + snr * interference_envelope_sum);
}

double sinr_collision(double snr, int n_nodes) {
  if (n_nodes < 1) throw DomainError("sinr_collision: n_nodes must be >= 1");
  return sinr_general(snr, static_cast<double>(n_nodes - 1));
}

double sinr_collision(const NetworkScenario& scenario) {
  scenario.validate();
  return sinr_collision(scenario.snr, scenario.n_nodes);
}

double sinr_with_interferers(double own_snr, double interferer_snr, int n_nodes) {
  if (!(own_snr > 0.0)) throw DomainError("sinr_with_interferers: own_snr must be > 0");
  if (!(interferer_snr >= 0.0)) throw DomainError("sinr_with_interferers: interferer_snr must be >= 0");
  if (n_nodes < 1) throw DomainError("sinr_with_interferers: n_nodes must be >= 1");
  return own_snr / (1.0 + interferer_snr * (n_nodes - 1));
}

double fb_rate_with_qinv(double sinr, double envelope_sq, int blocklength, double q_inv) {
  const double gain = sinr * envelope_sq;
  // 1 - (1+g)^{-2} = g(2+g)/(1+g)^2, without cancellation for small g.
  const double one_plus = 1.0 + gain;
  const double dispersion = gain * (2.0 + gain) / (one_plus * one_plus);
  return std::log1p(gain) * std::numbers::log2e -
         std::sqrt(dispersion / blocklength) * q_inv * std::numbers::log2e;
}

double fb_rate(double sinr, FadingRealization fading, int blocklength, double epsilon) {
  if (!(sinr > 0.0)) throw DomainError("fb_rate: sinr must be > 0");
  if (!(fading.envelope_sq >= 0.0)) throw DomainError("fb_rate: envelope_sq must be >= 0");
  if (blocklength < 1) throw DomainError("fb_rate: blocklength must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("fb_rate: epsilon must lie in (0, 1)");
  return fb_rate_with_qinv(sinr, fading.envelope_sq, blocklength, gaussian_q_inv(epsilon));
}

}  // namespace ecfb
