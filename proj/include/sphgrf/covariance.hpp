#pragma once

// Schoenberg-series covariances with certified truncation, incremental
// variances, the Berg-Porcu spatio-temporal covariance and covariance
// matrices over point sets.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphgrf/spectrum.hpp"

namespace sgrf {

enum class TemporalKind { Gauss, ExpDecay, Rational };

const char* to_string(TemporalKind kind) noexcept;
TemporalKind temporal_kind_from_string(const std::string& name);

/// Characteristic function of a symmetric law on the line:
///   Gauss     exp(-b t^2 / 2)
///   ExpDecay  exp(-b |t|)
///   Rational  1 / (1 + b t^2)
struct TemporalCF {
  TemporalKind kind = TemporalKind::Gauss;
  double b = 1.0;

  TemporalCF() = default;
  TemporalCF(TemporalKind kind, double b);
  double operator()(double t) const noexcept;
  friend bool operator==(const TemporalCF&, const TemporalCF&) = default;
};

/// Spectrum plus per-degree temporal characteristic functions and constants.
/// Degrees past the end of either list reuse its last entry.
class SpaceTimeCovarianceModel {
 public:
  SpaceTimeCovarianceModel(AngularPowerSpectrum spectrum, std::vector<TemporalCF> temporal,
                           std::vector<double> c_l = {1.0});

  const AngularPowerSpectrum& spectrum() const noexcept { return spectrum_; }
  const std::vector<TemporalCF>& temporal() const noexcept { return temporal_; }
  const std::vector<double>& c_l() const noexcept { return c_l_; }
  const TemporalCF& temporal_for(std::size_t n) const noexcept;
  double c_for(std::size_t n) const noexcept;
  /// Largest c_n^2 over all degrees.
  double max_c_squared() const noexcept { return max_c2_; }

 private:
  AngularPowerSpectrum spectrum_;
  std::vector<TemporalCF> temporal_;
  std::vector<double> c_l_;
  double max_c2_ = 1.0;
};

/// A truncated series value with its certified half-width.
struct SeriesValue {
  double value = 0.0;
  double bound = 0.0;
  std::size_t degree = 0;  // last degree summed
};

/// C(t) = c * sum_n a_n W_n(t). |error| <= bound <= tol.
SeriesValue schoenberg_cov(const AngularPowerSpectrum& spec, double t, double tol,
                           std::size_t cap = kDefaultTermCap);

enum class IncrementMethod { Direct, Star };
const char* to_string(IncrementMethod m) noexcept;

/// I(v) = sum_n a_n (1 - W_n(cos v)), with c = 1. Both methods drop the same
/// oscillatory remainder and return the midpoint of the certified interval.
SeriesValue incremental_variance(const AngularPowerSpectrum& spec, double v, double tol,
                                 IncrementMethod method = IncrementMethod::Direct,
                                 std::size_t cap = kDefaultTermCap);

/// Direct series at a fixed degree: sum_{n <= N} a_n (1 - W_n(cos v)) + A_{N+1}.
SeriesValue incremental_variance_at_degree(const AngularPowerSpectrum& spec, double v, std::size_t N);

enum class ConvertDirection { CToI, IToC };

/// i = 2 (C(1) - C(x)) and its inverse C(x) = C(1) - i/2.
double i_c_convert(double c_at_one, double value, ConvertDirection direction);

/// c * sum_n a_n c_n^2 W_n(cosangle) phi_n(dt).
SeriesValue bp_cov(const SpaceTimeCovarianceModel& model, double cosangle, double dt, double tol,
                   std::size_t cap = kDefaultTermCap);

struct SpaceTimePoint {
  SpherePoint x;
  double t = 0.0;
};

struct JitterPolicy {
  bool automatic = false;
  double max_jitter = 0.0;  // absolute cap on the added diagonal
  bool factorize = true;    // false: assemble the matrix only

  static JitterPolicy none() { return {}; }
  static JitterPolicy autojitter(double max_jitter) { return {true, max_jitter, true}; }
  static JitterPolicy matrix_only() { return {false, 0.0, false}; }
};

struct CovMatrix {
  Eigen::MatrixXd matrix;
  double jitter_added = 0.0;
  /// Lower-triangular factor with matrix + jitter I = factor factor^T.
  Eigen::MatrixXd factor;
};

CovMatrix cov_matrix(const AngularPowerSpectrum& spec, const std::vector<SpherePoint>& points, double tol,
                     JitterPolicy policy = JitterPolicy::none());
CovMatrix cov_matrix(const SpaceTimeCovarianceModel& model, const std::vector<SpaceTimePoint>& points, double tol,
                     JitterPolicy policy = JitterPolicy::none());

/// Factors a symmetric positive semidefinite matrix. Tries Cholesky, then a
/// pivoted LDL^T for semidefinite input, then (with an automatic policy)
/// doubling diagonal jitter from 1e-12 * max diagonal up to the cap.
/// Returns the factor and the jitter that was added.
std::pair<Eigen::MatrixXd, double> psd_factor(const Eigen::MatrixXd& m, JitterPolicy policy);

/// Evaluates C at many cosines with one shared truncation degree.
class CovarianceTable {
 public:
  CovarianceTable(const AngularPowerSpectrum& spec, double tol, std::size_t cap = kDefaultTermCap);
  double operator()(double t) const;
  double bound() const noexcept { return bound_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

 private:
  GegenbauerIndex lambda_;
  double scale_;
  std::vector<double> coeffs_;
  double bound_;
  bool normalized_ = false;
};

}  // namespace sgrf
