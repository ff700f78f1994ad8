#pragma once

#include <string>
#include <vector>

namespace ecfb {

/// N equal-power nodes sharing a Rayleigh block-fading collision channel.
struct NetworkScenario {
  int n_nodes = 1;
  double snr = 1.0;           ///< linear SNR of a single node
  int blocklength = 1000;     ///< symbols per packet
  double delay_exponent = 0.01;

  /// Throws DomainError naming the offending field.
  void validate() const;
  /// Non-fatal remarks, e.g. blocklengths where the normal approximation is loose.
  std::vector<std::string> warnings() const;
};

/// Fading power |h|^2 of one block; unit exponential under Rayleigh fading.
struct FadingRealization {
  double envelope_sq = 0.0;
};

/// SINR with an explicit sum of interfering fading powers.
double sinr_general(double snr, double interference_envelope_sum);

/// SINR when the N-1 interferers are replaced by their mean power.
double sinr_collision(double snr, int n_nodes);
double sinr_collision(const NetworkScenario& scenario);

/// SINR of a node at own_snr colliding with n_nodes - 1 nodes at interferer_snr,
/// interferers again replaced by their mean power.
double sinr_with_interferers(double own_snr, double interferer_snr, int n_nodes);

/// Normal-approximation achievable rate in bits per channel use.
/// Negative values are returned unclamped.
double fb_rate(double sinr, FadingRealization fading, int blocklength, double epsilon);

/// fb_rate with Q^{-1}(epsilon) supplied by the caller, for inner loops that
/// evaluate many fading states at one error probability.
double fb_rate_with_qinv(double sinr, double envelope_sq, int blocklength, double q_inv);

}  // namespace ecfb
