#pragma once

// Incremental variance I(theta) for angles down to exp(-800), where the
// series would need astronomically many terms. Degrees below n0 are summed
// exactly; the tail uses the Hilb-type approximation
//   W_n(cos theta) ~ (theta / sin theta)^{lambda} Lambda((n + lambda) theta),
//   Lambda(z) = Gamma(alpha + 1) (2/z)^alpha J_alpha(z),  alpha = lambda - 1/2,
// and replaces the sum over n by a midpoint-rule integral.

#include <vector>

#include "sphgrf/spectrum.hpp"

namespace sgrf::detail {

class IncrementEvaluator {
 public:
  explicit IncrementEvaluator(const AngularPowerSpectrum& spec);

  /// I at theta = exp(log_theta), theta in (0, pi].
  double operator()(double log_theta) const;
  /// log I at theta = exp(log_theta); stays finite where I underflows.
  double log_value(double log_theta) const;

 private:
  // Tail contribution multiplied by exp(-log_scale).
  double tail_part(double log_theta, double log_scale = 0.0) const;
  double lambda_function(double z) const;  // Lambda(z)

  AngularPowerSpectrum spec_;
  double lambda_;
  double alpha_;
  double log_gamma_alpha1_;
  std::size_t n0_;
  std::vector<double> head_;  // a_0 .. a_{n0-1}
  double tail_mass_n0_;       // A_{n0}
  double log_head_curvature_; // log sum_{n<n0} a_n n(n+2 lambda) / (2(2 lambda+1))
  bool has_tail_;
  // Lambda at the fixed oscillatory-panel nodes that start at z = 1.
  std::vector<double> z_nodes_;
  std::vector<double> z_weights_;
  std::vector<double> lambda_at_nodes_;
};

}  // namespace sgrf::detail
