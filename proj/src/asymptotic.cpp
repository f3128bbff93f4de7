#include "asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphgrf/error.hpp"

namespace sgrf::detail {

namespace {

constexpr std::size_t kExactDegrees = 1000;
constexpr int kOscillatoryPanels = 32;
constexpr int kPanelNodes = 12;

const QuadratureRule& panel_rule() {
  static const QuadratureRule rule = gauss_gegenbauer(0.5, kPanelNodes);
  return rule;
}

// log x for x = e^u - lambda, x > 0.
double log_shifted(double u, double lambda) {
  if (u > 700.0) return u + std::log1p(-lambda * std::exp(-u));
  return std::log(std::exp(u) - lambda);
}

}  // namespace

IncrementEvaluator::IncrementEvaluator(const AngularPowerSpectrum& spec) : spec_(spec) {
  if (spec.lambda().is_infinite()) {
    throw UnsupportedError("small-angle increment evaluation needs a finite lambda");
  }
  lambda_ = spec.lambda().value();
  alpha_ = lambda_ - 0.5;
  log_gamma_alpha1_ = std::lgamma(alpha_ + 1.0);
  has_tail_ = spec.has_tail();
  n0_ = std::max(kExactDegrees, static_cast<std::size_t>(spec.head_degree()) + 1);
  head_.resize(n0_);
  spec.coefficients(0, head_);
  tail_mass_n0_ = spec.tail_sum(n0_);
  double curvature = 0.0;
  for (std::size_t n = 1; n < n0_; ++n) curvature += head_[n] * n * (n + 2.0 * lambda_);
  log_head_curvature_ = std::log(curvature / (2.0 * (2.0 * lambda_ + 1.0)));

  const QuadratureRule& gl = panel_rule();
  for (int p = 0; p < kOscillatoryPanels; ++p) {
    const double a = 1.0 + p * std::numbers::pi;
    const double half = 0.5 * std::numbers::pi;
    for (int i = 0; i < kPanelNodes; ++i) {
      const double z = a + half + half * gl.nodes[i];
      z_nodes_.push_back(z);
      z_weights_.push_back(2.0 * half * gl.weights[i]);
      lambda_at_nodes_.push_back(lambda_function(z));
    }
  }
}

double IncrementEvaluator::lambda_function(double z) const {
  return std::exp(log_gamma_alpha1_ + alpha_ * std::log(2.0 / z)) * std::cyl_bessel_j(alpha_, z);
}

double IncrementEvaluator::operator()(double log_theta) const {
  log_theta = std::min(log_theta, std::log(std::numbers::pi));
  double head = 0.0;
  if (log_theta > -300.0) {
    const double half = std::sin(0.5 * std::exp(log_theta));
    ComplementStepper d(spec_.lambda(), half * half);
    for (double a : head_) head += a * d.next();
  }
  return has_tail_ ? head + tail_part(log_theta) : head;
}

double IncrementEvaluator::log_value(double log_theta) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (log_theta > -300.0) {
    const double v = (*this)(log_theta);
    return v > 0.0 ? std::log(v) : kNegInf;
  }
  // Below n0 every degree is in its quadratic regime: 1 - W_n ~ n(n+2 lambda) theta^2 / (2(2 lambda+1)).
  const double log_head = 2.0 * log_theta + log_head_curvature_;
  if (!has_tail_) return log_head;
  const double log_mass = spec_.tail_log_mass_at_log(-log_theta);
  if (!std::isfinite(log_mass)) return log_head;
  const double log_scale = std::max(log_head, log_mass);
  const double scaled = std::exp(log_head - log_scale) + tail_part(log_theta, log_scale);
  return scaled > 0.0 ? log_scale + std::log(scaled) : kNegInf;
}

double IncrementEvaluator::tail_part(double lt, double log_scale) const {
  const QuadratureRule& gl = panel_rule();
  const double lam = lambda_;
  const double theta = std::exp(lt);
  const double x0 = static_cast<double>(n0_) - 0.5;
  const double s0 = std::log(x0 + lam) + lt;  // log z at the first tail degree

  // Degree density g(t) = x a(x) at x = e^t, as a function of s = log z.
  auto density_at_s = [&](double s) {
    const double ld = spec_.tail_log_density_at_log(log_shifted(s - lt, lam));
    return std::exp(ld - log_scale);
  };

  // Part 1: z <= 1, where 1 - W ~ Phi(z) = 1 - Lambda(z) by its power series.
  double part1 = 0.0;
  if (s0 < 0.0) {
    auto phi = [&](double z) {
      const double q = 0.25 * z * z;
      double term = q / (alpha_ + 1.0);
      double sum = term;
      for (int m = 1; m < 60 && std::abs(term) > 1e-17 * std::abs(sum); ++m) {
        term *= -q / ((m + 1.0) * (alpha_ + 1.0 + m));
        sum += term;
      }
      return sum;
    };
    double top = 0.0;
    for (int p = 0; p < 400 && top > s0; ++p) {
      const double w = std::max(1.0, 0.25 * (-top));
      const double bottom = std::max(top - w, s0);
      const double mid = 0.5 * (top + bottom);
      const double half = 0.5 * (top - bottom);
      double panel = 0.0;
      for (int i = 0; i < kPanelNodes; ++i) {
        const double s = mid + half * gl.nodes[i];
        const double u = s - lt;
        const double jac = 1.0 / (1.0 - lam * std::exp(-u));  // dt/ds
        panel += gl.weights[i] * density_at_s(s) * phi(std::exp(s)) * jac;
      }
      panel *= 2.0 * half;
      part1 += panel;
      top = bottom;
      if (p >= 3 && panel <= 1e-17 * part1) break;
    }
  }

  // Part 2: z >= z_s, written as the mass beyond x_s minus the oscillatory
  // integral of g Lambda(z) dz / (z - lambda theta).
  const bool from_one = s0 < 0.0;
  const double zs = from_one ? 1.0 : std::exp(s0);
  const double mass = from_one ? std::exp(spec_.tail_log_mass_at_log(log_shifted(-lt, lam - 0.5)) - log_scale)
                                : tail_mass_n0_ * std::exp(-log_scale);
  double integral = 0.0;
  auto weight_at = [&](double z) { return density_at_s(std::log(z)) / (z - lam * theta); };
  if (from_one) {
    for (std::size_t i = 0; i < z_nodes_.size(); ++i) {
      integral += z_weights_[i] * weight_at(z_nodes_[i]) * lambda_at_nodes_[i];
    }
  } else {
    const double half = 0.5 * std::numbers::pi;
    for (int p = 0; p < kOscillatoryPanels; ++p) {
      const double a = zs + p * std::numbers::pi;
      for (int i = 0; i < kPanelNodes; ++i) {
        const double z = a + half + half * gl.nodes[i];
        integral += 2.0 * half * gl.weights[i] * weight_at(z) * lambda_function(z);
      }
    }
  }
  // Leading term of the remaining oscillatory integral beyond z_end.
  const double z_end = zs + kOscillatoryPanels * std::numbers::pi;
  const double phase = 0.5 * alpha_ * std::numbers::pi + 0.25 * std::numbers::pi;
  const double envelope = std::exp(log_gamma_alpha1_ + alpha_ * std::log(2.0 / z_end)) *
                          std::sqrt(2.0 / (std::numbers::pi * z_end));
  integral -= weight_at(z_end) * envelope * std::sin(z_end - phase);

  const double kappa = theta < 1e-4 ? 1.0 : std::pow(theta / std::sin(theta), lam);
  return part1 + mass - kappa * integral;
}

}  // namespace sgrf::detail
