#pragma once

// Normalized Gegenbauer and Jacobi polynomials, real spherical harmonics on
// the 2-sphere, Gauss-Gegenbauer quadrature and sphere geometry.
//
// All functions here are pure and thread safe.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sgrf {

/// Gegenbauer index lambda > 0, or the Hilbert-sphere marker (lambda = infinity),
/// for which W_n(x) = x^n.
class GegenbauerIndex {
 public:
  static GegenbauerIndex finite(double lambda);
  static GegenbauerIndex infinite() { return GegenbauerIndex(); }
  /// lambda = (d-1)/2 for the d-sphere, d >= 2.
  static GegenbauerIndex from_dimension(int d);

  bool is_infinite() const noexcept { return infinite_; }
  /// Throws DomainError for the infinite index.
  double value() const;
  /// Integer sphere dimension d with lambda = (d-1)/2, if there is one.
  std::optional<int> dimension() const noexcept;

  friend bool operator==(const GegenbauerIndex&, const GegenbauerIndex&) = default;

 private:
  GegenbauerIndex() = default;
  explicit GegenbauerIndex(double v) : value_(v), infinite_(false) {}
  double value_ = 0.0;
  bool infinite_ = true;
};

/// Jacobi parameters (alpha, beta), both >= -1/2, alpha >= beta.
struct JacobiPair {
  double alpha = 0.0;
  double beta = 0.0;

  JacobiPair() = default;
  JacobiPair(double a, double b);
  /// alpha = beta = lambda - 1/2.
  static JacobiPair ultraspherical(double lambda) { return {lambda - 0.5, lambda - 0.5}; }
};

/// Unit vector in R^{d+1}.
class SpherePoint {
 public:
  /// Requires |norm - 1| <= 1e-12.
  explicit SpherePoint(std::vector<double> coords);
  /// Scales a nonzero vector onto the sphere.
  static SpherePoint normalized(std::vector<double> coords);
  /// Point at colatitude/longitude on the 2-sphere.
  static SpherePoint from_angles(double colatitude, double longitude);

  int dimension() const noexcept { return static_cast<int>(coords_.size()) - 1; }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

/// Inner product clamped to [-1, 1]. Excursions beyond 1e-12 are errors.
double cos_angle(const SpherePoint& x, const SpherePoint& y);
/// Geodesic distance in radians, in [0, pi].
double geodesic_angle(const SpherePoint& x, const SpherePoint& y);

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, in (-1, 1)
  std::vector<double> weights;  // positive, summing to 1
};

/// Streams W_0(x), W_1(x), ... one value per call to next(), in O(1) memory.
class GegenbauerStepper {
 public:
  GegenbauerStepper(GegenbauerIndex lambda, double x);
  double next();

 private:
  double lam_;
  bool infinite_;
  double x_;
  int n_ = 0;  // degree of the value returned by the next call
  double prev_ = 0.0;
  double cur_ = 1.0;
};

/// Streams 1 - W_0, 1 - W_1, ... at x = 1 - 2s, s = sin^2(theta/2).
class ComplementStepper {
 public:
  ComplementStepper(GegenbauerIndex lambda, double s);
  double next();

 private:
  double lam_;
  bool infinite_;
  double s_;
  double log_x_ = 0.0;
  int n_ = 0;
  double prev_ = 0.0;
  double cur_ = 0.0;
};

/// Streams R_0(x), R_1(x), ... for a Jacobi pair.
class JacobiStepper {
 public:
  JacobiStepper(JacobiPair jp, double x);
  double next();

 private:
  JacobiPair jp_;
  double x_;
  int n_ = 0;
  double prev_ = 0.0;
  double cur_ = 1.0;
};

/// [W_0(x), ..., W_{n_max}(x)] with W_n = C_n^lambda / C_n^lambda(1).
std::vector<double> gegenbauer_w_sequence(GegenbauerIndex lambda, double x, int n_max);

/// [1 - W_0, ..., 1 - W_{n_max}] at x = cos(theta), given s = sin^2(theta/2).
/// Evaluated through a recurrence on the complements, so the values keep full
/// relative accuracy when theta is tiny.
std::vector<double> gegenbauer_one_minus_w_sequence(GegenbauerIndex lambda, double s, int n_max);

/// R_n^{(alpha,beta)}(x) = P_n^{(alpha,beta)}(x) / P_n^{(alpha,beta)}(1).
double jacobi_r(int n, JacobiPair jp, double x);
/// [R_0(x), ..., R_{n_max}(x)].
std::vector<double> jacobi_r_sequence(JacobiPair jp, double x, int n_max);

/// omega_n^lambda = ((n+lambda)/lambda) * Gamma(n+2 lambda) / (Gamma(2 lambda) n!),
/// the reciprocal of the squared norm of W_n in L^2(G_lambda).
double omega(int n, double lambda);

/// Number of linearly independent spherical harmonics of degree ell on S^d.
/// Throws OverflowError if the count does not fit in 64 bits.
std::uint64_t c_dim(int ell, int d);

/// Surface area of the unit d-sphere, 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double sphere_area(int d);

/// Gauss rule for the probability measure
/// G_lambda(dx) proportional to (1 - x^2)^{lambda - 1/2} dx on [-1, 1].
QuadratureRule gauss_gegenbauer(double lambda, int n_nodes);

/// Fully normalized real spherical harmonic on S^2 (integral of Y^2 over the
/// sphere with total area 4 pi equals 1). Built from associated Legendre
/// functions with the Condon-Shortley phase; m > 0 selects cos(m phi), m < 0
/// selects sin(|m| phi).
double real_sph_harm(int ell, int m, const SpherePoint& p);

/// All Y_{ell m}(p) for ell <= l_max, stored at index ell*ell + ell + m.
std::vector<double> real_sph_harm_all(int l_max, const SpherePoint& p);

}  // namespace sgrf
