#pragma once

// Gaussian field samplers: truncated Karhunen-Loeve on S^2, stationary
// spatio-temporal KL on S^2 x R, dense factorization on any S^d, and the
// product-form expansion used to check the sphere-cross-line covariance
// computation.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sphgrf/covariance.hpp"
#include "sphgrf/rng.hpp"

namespace sgrf {

enum class SampleMethod { KL, Cholesky, SpacetimeKL, LiteralTxt };

const char* to_string(SampleMethod m) noexcept;

/// Replicated field values. Column j of `values` holds point j % P at time
/// index j / P (a single implicit time 0 for purely spatial samples).
struct FieldSample {
  std::vector<SpherePoint> points;
  std::vector<double> times;
  Eigen::MatrixXd values;  // replicates x (points * max(1, times))
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int truncation_L = -1;  // -1 when no truncation is involved
  SampleMethod method = SampleMethod::KL;
  double jitter_added = 0.0;

  Eigen::Index replicates() const noexcept { return values.rows(); }
  std::size_t time_count() const noexcept { return times.empty() ? 1 : times.size(); }
};

/// T(x) = sum_{ell <= L} sum_m a_{lm} Y_{lm}(x), a_{lm} ~ N(0, v_ell) independent.
FieldSample sample_kl_sphere(const AngularPowerSpectrum& spec, int L, const std::vector<SpherePoint>& points,
                             int replicates, const RngSpec& rng);

/// Independent stationary temporal series per (ell, m) with autocorrelation
/// phi_ell and variance v_ell c_ell^2. `times` must be strictly increasing.
FieldSample sample_spacetime(const SpaceTimeCovarianceModel& model, int L, const std::vector<SpherePoint>& points,
                             const std::vector<double>& times, int replicates, const RngSpec& rng);

/// factor * z for standard normal z; `cov.factor` must already be computed.
FieldSample sample_cholesky(const CovMatrix& cov, int replicates, const RngSpec& rng,
                            std::vector<SpherePoint> points = {});

struct LiteralExpansionReport {
  double empirical_cov = 0.0;
  double standard_error = 0.0;
  /// (1/omega_d) sum v_ell c(ell,d) c_ell^2 phi_ell(s) phi_ell(t) W_ell(<x,y>).
  double formula_value = 0.0;
  double z_score = 0.0;
  /// Truncated stationary form c sum a_ell c_ell^2 phi_ell(t - s) W_ell(<x,y>).
  double stationary_value = 0.0;
  /// True when the product and stationary forms differ by more than 1e-10.
  bool forms_differ = false;
};

/// Simulates T(x,t) = sum a_{lm} c_ell phi_ell(t) Y_{lm}(x) and compares the
/// empirical covariance of (T(x,s), T(y,t)) with its product-form formula.
LiteralExpansionReport verify_literal_expansion(const SpaceTimeCovarianceModel& model, const SpherePoint& x,
                                                const SpherePoint& y, double s, double t, int L, int replicates,
                                                const RngSpec& rng);

}  // namespace sgrf
