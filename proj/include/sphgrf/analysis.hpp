#pragma once

// Numerical checks of small-lag asymptotics and path regularity: the
// Malyarenko and Hilbert-sphere asymptotes, the Jacobi difference identity,
// Dudley-integral classification, integrability and moment bounds, and
// variogram-based Hoelder estimates.

#include <cstddef>
#include <optional>
#include <vector>

#include "sphgrf/covariance.hpp"
#include "sphgrf/rng.hpp"
#include "sphgrf/sampler.hpp"
#include "sphgrf/spectrum.hpp"

namespace sgrf {

/// Constant K in I(v) ~ K v^gamma l(1/v) for A_n ~ l(n) n^{-gamma}:
///   K = Gamma(lambda + 1/2) Gamma(1 - gamma/2) / (2^gamma Gamma(lambda + 1/2 + gamma/2)).
/// Requires lambda + 1/2 - gamma/2 >= 1e-8.
double malyarenko_constant(double lambda, double gamma);

struct RatioSeries {
  std::vector<double> v;          // strictly decreasing angles
  std::vector<double> measured;   // series value at v
  std::vector<double> predicted;  // asymptote at v
  std::vector<double> ratios;     // measured / predicted
  std::vector<double> bounds;     // certified half-width of `measured`
  std::vector<std::size_t> degrees;
};

/// I_series(v) / (K amplitude v^gamma (log 1/v)^{-k}) for a power tail.
/// Each I value is truncated so that its certified half-width is at most 1%
/// of the predicted value.
RatioSeries malyarenko_ratio(const AngularPowerSpectrum& spec, const std::vector<double>& v_grid,
                             std::size_t cap = kDefaultTermCap);

/// 1 - sum_n a_n (cos v)^n, with truncation once (cos v)^N is below 1e-16
/// relative to `target`. Returns value and certified half-width.
SeriesValue hilbert_increment(const AngularPowerSpectrum& spec, double v, double target,
                              std::size_t cap = kDefaultTermCap);

/// (1 - sum a_n cos^n v) / ((Gamma(1 - e)/2^e) amplitude v^{2e} (log 1/v^2)^{-k})
/// for a power tail with n-exponent e in (0, 1).
RatioSeries hilbert_ratio(const AngularPowerSpectrum& spec, const std::vector<double>& v_grid,
                          std::size_t cap = kDefaultTermCap);

/// |R_n - R_{n+1} - ((2n + alpha + beta + 2)/(alpha + 1)) sin^2(theta/2) R_n^{(alpha+1, beta)}| at cos theta.
double jacobi_difference_check(int n, JacobiPair jp, double theta);

enum class Continuity { Continuous, Discontinuous, Indeterminate };
const char* to_string(Continuity c) noexcept;

struct DudleyReport {
  Continuity analytic = Continuity::Indeterminate;
  Continuity numeric = Continuity::Indeterminate;
  /// Sum of the computed octave integrals; infinity when judged divergent.
  double numeric_value = 0.0;
  std::vector<double> octave_sums;
  std::vector<double> last_ratios;  // S_{j+1}/S_j over the final octaves
  bool agree = false;
};

/// Number of octaves in the dyadic diagnostics.
inline constexpr int kDyadicOctaves = 1200;

DudleyReport dudley_classify(const AngularPowerSpectrum& spec, int octaves = kDyadicOctaves);

enum class Integrability { Finite, Divergent };
const char* to_string(Integrability i) noexcept;

struct IntegrabilityReport {
  Integrability decision = Integrability::Divergent;
  Summability summability = Summability::Undecided;
  /// Sum of the octave integrals of I(theta) theta^{-gamma} dtheta/theta; infinity when divergent.
  double value = 0.0;
  /// I(theta)/theta^gamma at the smallest and largest grid angles.
  double ratio_at_smallest = 0.0;
  double ratio_at_largest = 0.0;
  std::vector<double> last_ratios;
  bool agree = false;
};

/// Dyadic evaluation of the integral over (0, pi/2]; gamma in (0, 2).
IntegrabilityReport integrability_check(const AngularPowerSpectrum& spec, double gamma,
                                        int octaves = kDyadicOctaves);

struct MomentPair {
  double angle = 0.0;
  double moment = 0.0;           // empirical E|X(x) - X(y)|^{2n}
  double standard_error = 0.0;
  double gaussian_moment = 0.0;  // (2n-1)!! (2 c I)^n
  double ratio = 0.0;            // moment / gaussian_moment (1 for coincident points)
  double z_score = 0.0;
  double bound_ratio = 0.0;      // moment / angle^{gamma n}
};

struct MomentReport {
  std::vector<MomentPair> pairs;
  double max_bound_ratio = 0.0;
};

MomentReport moment_bound_check(const AngularPowerSpectrum& spec, int n,
                                const std::vector<std::pair<SpherePoint, SpherePoint>>& pairs, int replicates,
                                const RngSpec& rng, double gamma, double tol = 1e-6);

struct VariogramReport {
  std::vector<double> lags;     // h_k = k * spacing
  std::vector<double> vhat;     // mean squared increment
  std::vector<std::size_t> window;  // lag indices used in the fit
  double gamma_hat = 0.0;
  double holder_bound = 0.0;    // gamma_hat / 2
  bool degenerate = false;      // every increment was zero
  bool gamma_in_range = true;   // gamma_hat in [0, 2]
};

/// Empirical variogram of a sample on equally spaced points of a closed
/// great circle. Needs at least 1000 replicates.
VariogramReport variogram_holder(const FieldSample& sample);

/// Equally spaced points on the equator of S^d.
std::vector<SpherePoint> great_circle_points(int count, int d = 2);

/// sup{gamma : sum a_n n^gamma < infinity}; infinity for finite or geometric tails.
double langschwab_gamma_sup(const AngularPowerSpectrum& spec);

struct RegularityReport {
  std::optional<double> gamma_hat;
  Continuity dudley = Continuity::Indeterminate;
  std::optional<double> dudley_numeric;  // empty when divergent
  Continuity dudley_numeric_decision = Continuity::Indeterminate;
  double langschwab_gamma_sup = 0.0;
  std::optional<double> holder_bound;  // gamma_sup / 2 when finite, else gamma_hat / 2
};

RegularityReport regularity_report(const AngularPowerSpectrum& spec, const VariogramReport* variogram = nullptr);

}  // namespace sgrf
