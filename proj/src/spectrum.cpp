#include "sphgrf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sphgrf/error.hpp"
#include "tail.hpp"

namespace sgrf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Explicit terms summed before switching to quadrature in a numeric tail.
constexpr int kExplicitTailTerms = 2000;

const QuadratureRule& legendre20() {
  static const QuadratureRule rule = gauss_gegenbauer(0.5, 20);
  return rule;
}

double log_laplace_at_integer(double n, double lambda) {
  if (n < 1e150) return std::log1p(n * (n + 2.0 * lambda));
  return detail::log_laplace_factor(std::log(n), lambda);
}

}  // namespace

AngularPowerSpectrum::AngularPowerSpectrum(GegenbauerIndex lambda, double scale, std::vector<double> head,
                                           TailDescriptor tail, std::optional<int> dimension, double tail_sigma)
    : lambda_(lambda),
      dimension_(dimension),
      scale_(scale),
      head_(std::move(head)),
      base_tail_(tail),
      tail_sigma_(tail_sigma) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw DomainError("scale must be positive and finite");
  if (head_.empty()) throw DomainError("spectrum head must hold at least a_0");
  for (double a : head_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("spectrum coefficients must be finite and >= 0");
  }
  if (dimension_) {
    if (*dimension_ < 2) throw DomainError("sphere dimension must be >= 2");
    if (lambda_ != GegenbauerIndex::from_dimension(*dimension_)) {
      throw DomainError("lambda does not match (d - 1)/2 for the given dimension");
    }
  } else {
    dimension_ = lambda_.dimension();
  }
  if (!std::isfinite(tail_sigma_)) throw DomainError("fractional exponent must be finite");
  if (base_tail_.kind == TailKind::None) base_tail_ = TailDescriptor::none();
  detail::validate_tail(base_tail_, static_cast<double>(head_.size()));
  if (tail_sigma_ != 0.0) {
    if (lambda_.is_infinite()) throw DomainError("fractional transform needs a finite lambda");
    if (has_tail()) (void)this->tail();
  }
  rebuild_cache();
}

AngularPowerSpectrum AngularPowerSpectrum::from_tail(GegenbauerIndex lambda, TailDescriptor shape, int start,
                                                     double scale) {
  if (start < 1) throw DomainError("tail start must be >= 1");
  if (shape.kind == TailKind::None) throw DomainError("from_tail needs a nonempty tail shape");
  shape.amplitude = 1.0;
  detail::validate_tail(shape, start);
  shape.amplitude = std::exp(-detail::tail_log_mass(shape, std::log(static_cast<double>(start))));
  AngularPowerSpectrum spec(lambda, scale, std::vector<double>(static_cast<std::size_t>(start), 0.0), shape);
  return normalize(spec);
}

void AngularPowerSpectrum::rebuild_cache() {
  const std::size_t n = head_.size();
  suffix_.assign(n + 1, 0.0);
  // Neumaier-compensated suffix sums.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double a = head_[i];
    const double t = sum + a;
    comp += (std::abs(sum) >= std::abs(a)) ? (sum - t) + a : (a - t) + sum;
    sum = t;
    suffix_[i] = sum + comp;
  }
  tail_mass_ = has_tail() ? tail_mass_from(static_cast<double>(n)) : 0.0;
}

TailDescriptor AngularPowerSpectrum::tail() const {
  if (!has_tail()) return TailDescriptor::none();
  const double s = tail_sigma_;
  if (s == 0.0) return base_tail_;
  TailDescriptor t = base_tail_;
  switch (base_tail_.kind) {
    case TailKind::Power: {
      const double g = base_tail_.gamma - 2.0 * s;
      if (!(g > 0.0)) {
        throw DivergenceError("fractional transform makes the tail mass diverge (gamma - 2 sigma = " +
                              std::to_string(g) + ")");
      }
      t.gamma = g;
      t.amplitude = base_tail_.amplitude * base_tail_.gamma / g;
      return t;
    }
    case TailKind::LogOnly:
      if (s > 0.0) throw DivergenceError("fractional transform with sigma > 0 diverges on a log_only tail");
      return TailDescriptor::power(-2.0 * s, base_tail_.k + 1.0, base_tail_.amplitude * base_tail_.k / (-2.0 * s));
    case TailKind::Geometric:
    case TailKind::None:
      return t;
  }
  return t;
}

double AngularPowerSpectrum::tail_coefficient_real(double n) const {
  double lc = detail::tail_log_coefficient(base_tail_, n);
  if (tail_sigma_ != 0.0) lc += tail_sigma_ * log_laplace_at_integer(n, lambda_.value());
  return std::exp(lc);
}

double AngularPowerSpectrum::numeric_tail_mass_log(double t, double log_scale) const {
  const double lambda = lambda_.value();
  const double sigma = tail_sigma_;
  auto density = [&](double u) {
    return std::exp(detail::tail_log_density(base_tail_, u) + sigma * detail::log_laplace_factor(u, lambda) -
                    log_scale);
  };

  double sum = 0.0;
  double lower;
  if (t < std::log(1e12)) {
    const double n = std::exp(t);
    for (int j = 0; j < kExplicitTailTerms; ++j) sum += tail_coefficient_real(n + j);
    const double x0 = n + kExplicitTailTerms - 0.5;
    // Midpoint Euler-Maclaurin correction f'(x0)/24.
    sum += (tail_coefficient_real(x0 + 0.5) - tail_coefficient_real(x0 - 0.5)) / 24.0;
    sum *= std::exp(-log_scale);
    lower = std::log(x0);
  } else {
    lower = t + std::log1p(-0.5 * std::exp(-t));
  }

  const QuadratureRule& gl = legendre20();
  double integral = 0.0;
  double a = lower;
  for (int panel = 0; panel < 4000; ++panel) {
    const double w = std::max(1.0, 0.25 * (a - lower));
    const double mid = a + 0.5 * w;
    double part = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) part += gl.weights[i] * density(mid + 0.5 * w * gl.nodes[i]);
    part *= w;
    integral += part;
    a += w;
    if (panel >= 4 && part <= 1e-17 * (integral + sum)) return sum + integral;
  }
  throw NumericalError("transformed tail mass did not converge numerically");
}

double AngularPowerSpectrum::tail_mass_from(double n) const {
  if (!has_tail()) return 0.0;
  if (tail_sigma_ == 0.0) return std::exp(detail::tail_log_mass(base_tail_, std::log(n)));
  return numeric_tail_mass_log(std::log(n));
}

double AngularPowerSpectrum::coefficient(std::size_t n) const {
  if (n < head_.size()) return head_[n];
  if (!has_tail()) return 0.0;
  return tail_coefficient_real(static_cast<double>(n));
}

void AngularPowerSpectrum::coefficients(std::size_t begin, std::span<double> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coefficient(begin + i);
}

double AngularPowerSpectrum::tail_sum(std::size_t n) const {
  if (n < head_.size()) return suffix_[n] + tail_mass_;
  if (n == head_.size()) return tail_mass_;
  return tail_mass_from(static_cast<double>(n));
}

bool AngularPowerSpectrum::is_normalized(double tol) const { return std::abs(total_mass() - 1.0) <= tol; }

double AngularPowerSpectrum::tail_mass_at_log(double t) const {
  if (!has_tail()) return 0.0;
  if (tail_sigma_ == 0.0) return std::exp(detail::tail_log_mass(base_tail_, t));
  return numeric_tail_mass_log(t);
}

double AngularPowerSpectrum::tail_log_mass_at_log(double t) const {
  if (!has_tail()) return kNegInf;
  if (tail_sigma_ == 0.0) return detail::tail_log_mass(base_tail_, t);
  if (t < std::log(1e12)) return std::log(numeric_tail_mass_log(t));
  // Scale by the density at n so the quadrature stays in range.
  const double scale = tail_log_density_at_log(t);
  if (scale == kNegInf) return kNegInf;
  return scale + std::log(numeric_tail_mass_log(t, scale));
}

double AngularPowerSpectrum::tail_density_at_log(double t) const {
  const double ld = tail_log_density_at_log(t);
  return ld == kNegInf ? 0.0 : std::exp(ld);
}

double AngularPowerSpectrum::tail_log_density_at_log(double t) const {
  if (!has_tail()) return kNegInf;
  double ld = detail::tail_log_density(base_tail_, t);
  if (tail_sigma_ != 0.0 && ld != kNegInf) ld += tail_sigma_ * detail::log_laplace_factor(t, lambda_.value());
  return ld;
}

AngularPowerSpectrum AngularPowerSpectrum::with_scale(double scale) const {
  AngularPowerSpectrum copy = *this;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be positive and finite");
  copy.scale_ = scale;
  return copy;
}

AngularPowerSpectrum normalize(const AngularPowerSpectrum& raw) {
  const double total = raw.total_mass();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DivergenceError("spectrum total mass must be positive and finite");
  }
  AngularPowerSpectrum out = raw;
  for (double& a : out.head_) a /= total;
  out.base_tail_.amplitude /= total;
  out.rebuild_cache();
  return out;
}

AngularPowerSpectrum variances_to_aps(const VarianceSpectrum& vs) {
  if (vs.d < 2) throw DomainError("sphere dimension must be >= 2");
  if (vs.v.empty()) throw DomainError("variance spectrum is empty");
  const double area = sphere_area(vs.d);
  std::vector<double> a(vs.v.size());
  for (std::size_t l = 0; l < vs.v.size(); ++l) {
    if (!(vs.v[l] >= 0.0) || !std::isfinite(vs.v[l])) throw DomainError("variances must be finite and >= 0");
    a[l] = vs.v[l] * static_cast<double>(c_dim(static_cast<int>(l), vs.d)) / area;
  }
  return AngularPowerSpectrum(GegenbauerIndex::from_dimension(vs.d), 1.0, std::move(a), TailDescriptor::none(),
                              vs.d);
}

VarianceSpectrum aps_to_variances(const AngularPowerSpectrum& spec, std::optional<int> max_degree) {
  const auto d = spec.dimension();
  if (!d) throw DomainError("variance conversion needs lambda = (d - 1)/2 for an integer d");
  const int L = max_degree.value_or(spec.head_degree());
  if (L < 0) throw DomainError("maximum degree must be >= 0");
  const double area = sphere_area(*d);
  VarianceSpectrum vs;
  vs.d = *d;
  vs.v.resize(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) {
    vs.v[l] = spec.scale() * spec.coefficient(l) * area / static_cast<double>(c_dim(l, *d));
  }
  return vs;
}

double fractional_multiplier(int ell, double lambda, double sigma) {
  if (ell < 0) throw DomainError("degree must be >= 0");
  const double l = ell;
  return std::pow(1.0 + l * (l + 2.0 * lambda), 0.5 * sigma);
}

AngularPowerSpectrum fractional_transform(const AngularPowerSpectrum& spec, double sigma, bool renormalize) {
  if (spec.lambda().is_infinite()) throw DomainError("fractional transform needs a finite lambda");
  if (!std::isfinite(sigma)) throw DomainError("sigma must be finite");
  const double lambda = spec.lambda().value();
  std::vector<double> head(spec.head().begin(), spec.head().end());
  if (sigma != 0.0) {
    for (std::size_t l = 1; l < head.size(); ++l) {
      const double x = static_cast<double>(l);
      head[l] *= std::pow(1.0 + x * (x + 2.0 * lambda), sigma);
    }
  }
  AngularPowerSpectrum out(spec.lambda(), spec.scale(), std::move(head), spec.base_tail(), spec.dimension(),
                           spec.tail_sigma() + sigma);
  return renormalize ? normalize(out) : out;
}

const char* to_string(Summability s) noexcept {
  switch (s) {
    case Summability::Converges: return "CONVERGES";
    case Summability::Diverges: return "DIVERGES";
    case Summability::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

Summability summability_check(const AngularPowerSpectrum& spec, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("summability exponent must be positive");
  const TailDescriptor t = spec.tail();
  switch (t.kind) {
    case TailKind::None:
    case TailKind::Geometric:
      return Summability::Converges;
    case TailKind::LogOnly:
      return Summability::Diverges;
    case TailKind::Power: {
      const double tie = 1e-12 * std::max(1.0, t.gamma);
      if (gamma < t.gamma - tie) return Summability::Converges;
      if (gamma > t.gamma + tie) return Summability::Diverges;
      if (gamma != t.gamma) return Summability::Undecided;
      return t.k > 1.0 ? Summability::Converges : Summability::Diverges;
    }
  }
  return Summability::Undecided;
}

std::size_t truncation_degree(const AngularPowerSpectrum& spec, double mass_tol, std::size_t cap) {
  if (!(mass_tol > 0.0)) throw DomainError("truncation tolerance must be positive");
  const std::size_t L = static_cast<std::size_t>(spec.head_degree());
  if (spec.tail_sum(L + 1) <= mass_tol) {
    for (std::size_t n = 0; n <= L; ++n) {
      if (spec.tail_sum(n + 1) <= mass_tol) return n;
    }
    return L;
  }
  if (spec.tail_sum(cap + 1) > mass_tol) {
    // Estimate the needed degree by bisection in log n on the asymptotic mass.
    double lo = std::log(static_cast<double>(cap) + 1.0);
    double hi = std::max(lo, 1.0);
    while (hi < 700.0 && spec.tail_mass_at_log(hi) > mass_tol) hi *= 2.0;
    std::size_t required = 0;
    if (hi < 700.0) {
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (spec.tail_mass_at_log(mid) > mass_tol ? lo : hi) = mid;
      }
      const double n = std::exp(hi);
      required = n < 1.8e19 ? static_cast<std::size_t>(n) : 0;
    }
    throw TruncationError("series cannot reach tolerance " + std::to_string(mass_tol) + " within " +
                              std::to_string(cap) + " terms",
                          spec.tail_sum(cap + 1), required);
  }
  std::size_t lo = L + 1;  // tail_sum(lo + 1) may exceed tol
  std::size_t hi = cap;    // tail_sum(hi + 1) <= tol
  if (spec.tail_sum(lo + 1) <= mass_tol) return lo;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (spec.tail_sum(mid + 1) <= mass_tol ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace sgrf
