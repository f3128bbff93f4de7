#include "sphgrf/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sphgrf/error.hpp"

namespace sgrf {

namespace {

constexpr double kUnitTolerance = 1e-12;

void check_argument(double x) {
  if (!std::isfinite(x) || std::abs(x) > 1.0) {
    throw DomainError("polynomial argument must lie in [-1, 1], got " + std::to_string(x));
  }
}

void check_degree(int n) {
  if (n < 0) throw DomainError("degree must be nonnegative, got " + std::to_string(n));
}

}  // namespace

GegenbauerIndex GegenbauerIndex::finite(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("Gegenbauer index must be a finite positive real, got " + std::to_string(lambda));
  }
  return GegenbauerIndex(lambda);
}

GegenbauerIndex GegenbauerIndex::from_dimension(int d) {
  if (d < 2) throw DomainError("sphere dimension must be >= 2, got " + std::to_string(d));
  return GegenbauerIndex(0.5 * (d - 1));
}

double GegenbauerIndex::value() const {
  if (infinite_) throw DomainError("operation requires a finite Gegenbauer index");
  return value_;
}

std::optional<int> GegenbauerIndex::dimension() const noexcept {
  if (infinite_) return std::nullopt;
  const double d = 2.0 * value_ + 1.0;
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-12 || r < 2.0) return std::nullopt;
  return static_cast<int>(r);
}

JacobiPair::JacobiPair(double a, double b) : alpha(a), beta(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < -0.5 || b < -0.5) {
    throw DomainError("Jacobi parameters must be >= -1/2");
  }
  if (a < b) throw DomainError("Jacobi parameters must satisfy alpha >= beta");
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) throw DomainError("sphere points need at least 3 coordinates (d >= 2)");
  double sq = 0.0;
  for (double c : coords_) {
    if (!std::isfinite(c)) throw DomainError("sphere point has a non-finite coordinate");
    sq += c * c;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > kUnitTolerance) {
    throw DomainError("sphere point is not a unit vector (norm " + std::to_string(std::sqrt(sq)) + ")");
  }
}

SpherePoint SpherePoint::normalized(std::vector<double> coords) {
  double sq = 0.0;
  for (double c : coords) sq += c * c;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("cannot normalize a zero or non-finite vector");
  for (double& c : coords) c /= norm;
  return SpherePoint(std::move(coords));
}

SpherePoint SpherePoint::from_angles(double colatitude, double longitude) {
  const double s = std::sin(colatitude);
  return normalized({s * std::cos(longitude), s * std::sin(longitude), std::cos(colatitude)});
}

double cos_angle(const SpherePoint& x, const SpherePoint& y) {
  if (x.dimension() != y.dimension()) {
    throw DomainError("sphere points have different dimensions");
  }
  double ip = 0.0;
  for (std::size_t i = 0; i < x.coords().size(); ++i) ip += x[i] * y[i];
  if (std::abs(ip) > 1.0 + kUnitTolerance) {
    throw DomainError("inner product of unit vectors exceeds 1 by more than 1e-12");
  }
  return std::clamp(ip, -1.0, 1.0);
}

double geodesic_angle(const SpherePoint& x, const SpherePoint& y) { return std::acos(cos_angle(x, y)); }

GegenbauerStepper::GegenbauerStepper(GegenbauerIndex lambda, double x)
    : lam_(lambda.is_infinite() ? 0.0 : lambda.value()), infinite_(lambda.is_infinite()), x_(x) {
  check_argument(x);
}

double GegenbauerStepper::next() {
  double out;
  if (n_ == 0) {
    out = 1.0;
  } else if (n_ == 1 || infinite_ || x_ == 1.0 || x_ == -1.0) {
    // x = +-1 and lambda = infinity reduce to exact powers of x.
    out = cur_ * x_;
  } else {
    // W_{n+1} = (2(n+lam)/(n+2lam)) x W_n - (n/(n+2lam)) W_{n-1}, written for index n_ = n+1.
    const int n = n_ - 1;
    const double denom = n + 2.0 * lam_;
    out = (2.0 * (n + lam_) / denom) * x_ * cur_ - (n / denom) * prev_;
  }
  prev_ = cur_;
  cur_ = out;
  ++n_;
  return out;
}

ComplementStepper::ComplementStepper(GegenbauerIndex lambda, double s)
    : lam_(lambda.is_infinite() ? 0.0 : lambda.value()), infinite_(lambda.is_infinite()), s_(s) {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw DomainError("sin^2(theta/2) must lie in [0, 1]");
  }
  if (infinite_ && s < 0.25) log_x_ = std::log1p(-2.0 * s);
}

double ComplementStepper::next() {
  double out;
  if (n_ == 0 || s_ == 0.0) {
    out = 0.0;
  } else if (infinite_) {
    out = s_ < 0.25 ? -std::expm1(n_ * log_x_) : 1.0 - (1.0 - cur_) * (1.0 - 2.0 * s_);
  } else if (n_ == 1) {
    out = 2.0 * s_;
  } else {
    // Complement of the W recurrence; the coefficients satisfy a - b = 1.
    const int n = n_ - 1;
    const double denom = n + 2.0 * lam_;
    const double a = 2.0 * (n + lam_) / denom;
    const double b = n / denom;
    out = a * cur_ - b * prev_ + 2.0 * s_ * a * (1.0 - cur_);
  }
  prev_ = cur_;
  cur_ = out;
  ++n_;
  return out;
}

JacobiStepper::JacobiStepper(JacobiPair jp, double x) : jp_(jp), x_(x) { check_argument(x); }

double JacobiStepper::next() {
  double out;
  const double a = jp_.alpha;
  const double b = jp_.beta;
  const double ab = a + b;
  if (n_ == 0 || x_ == 1.0) {
    out = 1.0;
  } else if (n_ == 1) {
    out = 1.0 + (ab + 2.0) * (x_ - 1.0) / (2.0 * (a + 1.0));
  } else {
    const int n = n_ - 1;
    const double t = 2.0 * n + ab;
    const double c1 = (t + 1.0) * ((t + 2.0) * t * x_ + (a * a - b * b));
    const double c0 = 2.0 * n * (n + b) * (t + 2.0);
    const double denom = 2.0 * (n + ab + 1.0) * t * (n + a + 1.0);
    out = (c1 * cur_ - c0 * prev_) / denom;
  }
  prev_ = cur_;
  cur_ = out;
  ++n_;
  return out;
}

namespace {

template <class Stepper>
std::vector<double> collect(Stepper stepper, int n_max) {
  check_degree(n_max);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  for (double& v : out) v = stepper.next();
  return out;
}

}  // namespace

std::vector<double> gegenbauer_w_sequence(GegenbauerIndex lambda, double x, int n_max) {
  return collect(GegenbauerStepper(lambda, x), n_max);
}

std::vector<double> gegenbauer_one_minus_w_sequence(GegenbauerIndex lambda, double s, int n_max) {
  return collect(ComplementStepper(lambda, s), n_max);
}

std::vector<double> jacobi_r_sequence(JacobiPair jp, double x, int n_max) {
  return collect(JacobiStepper(jp, x), n_max);
}

double jacobi_r(int n, JacobiPair jp, double x) {
  check_degree(n);
  return jacobi_r_sequence(jp, x, n).back();
}

double omega(int n, double lambda) {
  check_degree(n);
  if (!std::isfinite(lambda) || lambda <= 0.0) throw DomainError("omega requires a finite lambda > 0");
  // Gamma(n + 2 lam) / (Gamma(2 lam) n!) = prod_{k=1}^n (k - 1 + 2 lam) / k
  double ratio = 1.0;
  bool finite = true;
  for (int k = 1; k <= n; ++k) {
    ratio *= (k - 1.0 + 2.0 * lambda) / k;
    if (!std::isfinite(ratio)) {
      finite = false;
      break;
    }
  }
  if (!finite) {
    ratio = std::exp(std::lgamma(n + 2.0 * lambda) - std::lgamma(2.0 * lambda) - std::lgamma(n + 1.0));
  }
  return (n + lambda) / lambda * ratio;
}

namespace {

__extension__ typedef unsigned __int128 uint128;

uint128 binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint128 result = 1;
  const uint128 limit = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > limit) throw OverflowError("spherical harmonic count overflows 64 bits");
  }
  return result;
}

}  // namespace

std::uint64_t c_dim(int ell, int d) {
  check_degree(ell);
  if (d < 2) throw DomainError("c_dim requires d >= 2");
  // Homogeneous harmonics of degree ell in d+1 variables:
  // C(ell+d-1, d-1) + C(ell+d-2, d-1).
  const auto l = static_cast<std::uint64_t>(ell);
  const auto dd = static_cast<std::uint64_t>(d);
  const uint128 total = binomial(l + dd - 1, dd - 1) + (ell >= 1 ? binomial(l + dd - 2, dd - 1) : 0);
  if (total > std::numeric_limits<std::uint64_t>::max()) {
    throw OverflowError("spherical harmonic count overflows 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

double sphere_area(int d) {
  if (d < 1) throw DomainError("sphere_area requires d >= 1");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

namespace {

// Normalized associated Legendre values p_{l m}(z) for fixed m, l = m..l_max,
// including 1/sqrt(4 pi) and the Condon-Shortley phase.
void legendre_column(int m, int l_max, double z, double rho, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(l_max - m) + 1, 0.0);
  double pmm = 0.5 / std::sqrt(std::numbers::pi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * rho;
  out[0] = pmm;
  if (l_max == m) return;
  out[1] = std::sqrt(2.0 * m + 3.0) * z * pmm;
  for (int l = m + 2; l <= l_max; ++l) {
    const double l2 = static_cast<double>(l) * l;
    const double m2 = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
    out[l - m] = a * (z * out[l - m - 1] - b * out[l - m - 2]);
  }
}

struct Azimuth {
  double cos_phi = 1.0;
  double sin_phi = 0.0;
  double z = 1.0;
  double rho = 0.0;
};

Azimuth azimuth_of(const SpherePoint& p) {
  if (p.dimension() != 2) {
    throw UnsupportedError("real spherical harmonics are implemented for d = 2 only");
  }
  Azimuth az;
  az.z = p[2];
  az.rho = std::hypot(p[0], p[1]);
  if (az.rho > 0.0) {
    az.cos_phi = p[0] / az.rho;
    az.sin_phi = p[1] / az.rho;
  }
  return az;
}

}  // namespace

double real_sph_harm(int ell, int m, const SpherePoint& p) {
  check_degree(ell);
  if (m < -ell || m > ell) throw DomainError("spherical harmonic order must satisfy |m| <= ell");
  const Azimuth az = azimuth_of(p);
  const int am = std::abs(m);
  std::vector<double> column;
  legendre_column(am, ell, az.z, az.rho, column);
  const double plm = column.back();
  if (m == 0) return plm;
  const double phi = std::atan2(az.sin_phi, az.cos_phi);
  const double trig = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
  return std::numbers::sqrt2 * plm * trig;
}

std::vector<double> real_sph_harm_all(int l_max, const SpherePoint& p) {
  check_degree(l_max);
  const Azimuth az = azimuth_of(p);
  const auto size = static_cast<std::size_t>(l_max + 1) * static_cast<std::size_t>(l_max + 1);
  std::vector<double> y(size, 0.0);
  std::vector<double> column;
  double cm = 1.0;  // cos(m phi)
  double sm = 0.0;  // sin(m phi)
  for (int m = 0; m <= l_max; ++m) {
    legendre_column(m, l_max, az.z, az.rho, column);
    for (int l = m; l <= l_max; ++l) {
      const auto base = static_cast<std::size_t>(l) * l + l;
      const double plm = column[l - m];
      if (m == 0) {
        y[base] = plm;
      } else {
        y[base + m] = std::numbers::sqrt2 * plm * cm;
        y[base - m] = std::numbers::sqrt2 * plm * sm;
      }
    }
    const double c_next = cm * az.cos_phi - sm * az.sin_phi;
    sm = sm * az.cos_phi + cm * az.sin_phi;
    cm = c_next;
  }
  return y;
}

}  // namespace sgrf
