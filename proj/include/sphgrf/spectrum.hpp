#pragma once

// Angular power spectra: mixing laws (a_n) of the Schoenberg expansion
//   C(x) = c * sum_n a_n W_n^lambda(x),
// stored as an explicit head a_0..a_L plus an analytic tail beyond L.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphgrf/specfun.hpp"

namespace sgrf {

enum class TailKind { None, Power, LogOnly, Geometric };

const char* to_string(TailKind kind) noexcept;
TailKind tail_kind_from_string(const std::string& name);

/// Analytic tail mass A_n = sum_{k >= n} a_k for degrees past the head:
///   Power:     amplitude * n^{-gamma} * (log n)^{-k}
///   LogOnly:   amplitude * (log n)^{-k}
///   Geometric: amplitude * r^n
///   None:      0 (finite support)
struct TailDescriptor {
  TailKind kind = TailKind::None;
  double gamma = 0.0;
  double k = 0.0;
  double r = 0.0;
  double amplitude = 0.0;

  static TailDescriptor none() { return {}; }
  static TailDescriptor power(double gamma, double k = 0.0, double amplitude = 1.0) {
    return {TailKind::Power, gamma, k, 0.0, amplitude};
  }
  static TailDescriptor log_only(double k, double amplitude = 1.0) {
    return {TailKind::LogOnly, 0.0, k, 0.0, amplitude};
  }
  static TailDescriptor geometric(double r, double amplitude = 1.0) {
    return {TailKind::Geometric, 0.0, 0.0, r, amplitude};
  }

  friend bool operator==(const TailDescriptor&, const TailDescriptor&) = default;
};

class AngularPowerSpectrum {
 public:
  /// `head` holds a_0..a_L; `tail` describes A_n for n >= L+1. The tail may
  /// carry a fractional multiplier exponent `tail_sigma`: tail coefficients
  /// are then a_n * (1 + n(n + 2 lambda))^{tail_sigma}.
  AngularPowerSpectrum(GegenbauerIndex lambda, double scale, std::vector<double> head,
                       TailDescriptor tail = TailDescriptor::none(), std::optional<int> dimension = std::nullopt,
                       double tail_sigma = 0.0);

  /// Head of zeros below `start`, then A_n = amplitude * profile(n) for
  /// n >= start with the amplitude chosen so that A_start = 1. The result is
  /// normalized. Example: power(1) from start 1 gives A_n = 1/n exactly.
  static AngularPowerSpectrum from_tail(GegenbauerIndex lambda, TailDescriptor shape, int start,
                                        double scale = 1.0);

  GegenbauerIndex lambda() const noexcept { return lambda_; }
  std::optional<int> dimension() const noexcept { return dimension_; }
  double scale() const noexcept { return scale_; }
  std::span<const double> head() const noexcept { return head_; }
  /// Largest explicitly stored degree L.
  int head_degree() const noexcept { return static_cast<int>(head_.size()) - 1; }
  bool has_tail() const noexcept { return base_tail_.kind != TailKind::None && base_tail_.amplitude > 0.0; }

  /// Asymptotic descriptor after any fractional transform (what summability
  /// and regularity decisions are based on).
  TailDescriptor tail() const;
  /// Descriptor as stored, before the multiplier.
  const TailDescriptor& base_tail() const noexcept { return base_tail_; }
  double tail_sigma() const noexcept { return tail_sigma_; }

  double coefficient(std::size_t n) const;
  /// a_n for n in [begin, begin + out.size()).
  void coefficients(std::size_t begin, std::span<double> out) const;

  /// A_n = sum_{k >= n} a_k.
  double tail_sum(std::size_t n) const;
  double total_mass() const { return tail_sum(0); }
  bool is_normalized(double tol = 1e-10) const;

  /// Real-argument tail helpers, valid for n >= L + 1, taking t = log n so
  /// that degrees far beyond double range can be addressed.
  /// Continuous tail mass A(e^t).
  double tail_mass_at_log(double t) const;
  /// log A(e^t), finite where A(e^t) itself underflows; -infinity without tail.
  double tail_log_mass_at_log(double t) const;
  /// n * a(n) at n = e^t, where a(n) = A(n) - A(n+1) (times the multiplier).
  double tail_density_at_log(double t) const;
  /// log of tail_density_at_log(t).
  double tail_log_density_at_log(double t) const;

  AngularPowerSpectrum with_scale(double scale) const;

  friend AngularPowerSpectrum normalize(const AngularPowerSpectrum& raw);
  friend AngularPowerSpectrum fractional_transform(const AngularPowerSpectrum& spec, double sigma,
                                                   bool renormalize);

 private:
  /// Tail coefficient (with multiplier) at real degree n >= L + 1.
  double tail_coefficient_real(double n) const;
  /// Tail mass from n = e^t on, by summation and quadrature (sigma != 0),
  /// multiplied by exp(-log_scale).
  double numeric_tail_mass_log(double t, double log_scale = 0.0) const;
  /// A_n for integer n >= L + 1.
  double tail_mass_from(double n) const;
  void rebuild_cache();

  GegenbauerIndex lambda_;
  std::optional<int> dimension_;
  double scale_;
  std::vector<double> head_;
  TailDescriptor base_tail_;
  double tail_sigma_;
  std::vector<double> suffix_;  // suffix_[n] = sum_{k=n}^{L} a_k
  double tail_mass_ = 0.0;      // A_{L+1}
};

/// Per-degree variances v_ell of the random Fourier coefficients a_{ell m}.
struct VarianceSpectrum {
  std::vector<double> v;
  int d = 2;
};

/// Scales head and tail so the total mass is 1. Throws DivergenceError for a
/// zero or non-finite total.
AngularPowerSpectrum normalize(const AngularPowerSpectrum& raw);

/// a_ell = v_ell * c(ell, d) / omega_d, scale 1, finite support.
AngularPowerSpectrum variances_to_aps(const VarianceSpectrum& vs);

/// v_ell = c * a_ell * omega_d / c(ell, d) for ell <= max_degree (defaults
/// to the head degree). Requires lambda = (d - 1)/2 for an integer d.
VarianceSpectrum aps_to_variances(const AngularPowerSpectrum& spec, std::optional<int> max_degree = std::nullopt);

/// Field-level multiplier (1 + ell(ell + 2 lambda))^{sigma/2} of (1 - Delta)^{sigma/2}.
double fractional_multiplier(int ell, double lambda, double sigma);

/// Applies (1 - Delta)^{sigma/2} to the field: a_ell -> a_ell * multiplier^2.
/// Throws DivergenceError when the transformed tail mass would diverge.
AngularPowerSpectrum fractional_transform(const AngularPowerSpectrum& spec, double sigma, bool renormalize);

enum class Summability { Converges, Diverges, Undecided };
const char* to_string(Summability s) noexcept;

/// Decides sum_n a_n n^gamma < infinity from the tail descriptor.
Summability summability_check(const AngularPowerSpectrum& spec, double gamma);

/// Smallest N with tail_sum(N + 1) <= mass_tol. Throws TruncationError when
/// N would exceed `cap`.
std::size_t truncation_degree(const AngularPowerSpectrum& spec, double mass_tol, std::size_t cap);

/// Default iteration cap for series truncation.
inline constexpr std::size_t kDefaultTermCap = std::size_t{1} << 24;

}  // namespace sgrf
