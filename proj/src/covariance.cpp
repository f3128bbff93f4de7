#include "sphgrf/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "sphgrf/error.hpp"
#include "sphgrf/parallel.hpp"

namespace sgrf {

namespace {

// Neumaier-compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

constexpr std::size_t kBlock = 4096;

void check_cosine(double t) {
  if (!std::isfinite(t) || std::abs(t) > 1.0) {
    throw DomainError("covariance argument must lie in [-1, 1], got " + std::to_string(t));
  }
}

void check_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive and finite");
}

}  // namespace

const char* to_string(TemporalKind kind) noexcept {
  switch (kind) {
    case TemporalKind::Gauss: return "gauss";
    case TemporalKind::ExpDecay: return "expdecay";
    case TemporalKind::Rational: return "rational";
  }
  return "unknown";
}

TemporalKind temporal_kind_from_string(const std::string& name) {
  if (name == "gauss") return TemporalKind::Gauss;
  if (name == "expdecay") return TemporalKind::ExpDecay;
  if (name == "rational") return TemporalKind::Rational;
  throw ConfigError("unknown temporal kind '" + name + "'");
}

TemporalCF::TemporalCF(TemporalKind k, double rate) : kind(k), b(rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("temporal rate b must be positive and finite");
}

double TemporalCF::operator()(double t) const noexcept {
  switch (kind) {
    case TemporalKind::Gauss: return std::exp(-0.5 * b * t * t);
    case TemporalKind::ExpDecay: return std::exp(-b * std::abs(t));
    case TemporalKind::Rational: return 1.0 / (1.0 + b * t * t);
  }
  return 0.0;
}

SpaceTimeCovarianceModel::SpaceTimeCovarianceModel(AngularPowerSpectrum spectrum, std::vector<TemporalCF> temporal,
                                                   std::vector<double> c_l)
    : spectrum_(std::move(spectrum)), temporal_(std::move(temporal)), c_l_(std::move(c_l)) {
  if (temporal_.empty()) throw DomainError("space-time model needs at least one temporal function");
  if (c_l_.empty()) c_l_ = {1.0};
  max_c2_ = 0.0;
  for (double c : c_l_) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constants c_l must be positive and finite");
    max_c2_ = std::max(max_c2_, c * c);
  }
}

const TemporalCF& SpaceTimeCovarianceModel::temporal_for(std::size_t n) const noexcept {
  return temporal_[std::min(n, temporal_.size() - 1)];
}

double SpaceTimeCovarianceModel::c_for(std::size_t n) const noexcept { return c_l_[std::min(n, c_l_.size() - 1)]; }

SeriesValue schoenberg_cov(const AngularPowerSpectrum& spec, double t, double tol, std::size_t cap) {
  check_cosine(t);
  check_tolerance(tol);
  const double c = spec.scale();
  SeriesValue out;
  if (t == 1.0) {
    // W_n(1) = 1: the series is the total mass.
    out.value = spec.is_normalized() ? c : c * spec.total_mass();
    return out;
  }
  const std::size_t N = truncation_degree(spec, tol / c, cap);
  out.degree = N;
  out.bound = c * spec.tail_sum(N + 1);
  GegenbauerStepper w(spec.lambda(), t);
  Accumulator acc;
  std::vector<double> a(kBlock);
  for (std::size_t start = 0; start <= N; start += kBlock) {
    const std::size_t len = std::min(kBlock, N + 1 - start);
    spec.coefficients(start, std::span<double>(a.data(), len));
    for (std::size_t i = 0; i < len; ++i) acc.add(a[i] * w.next());
  }
  out.value = c * acc.value();
  return out;
}

const char* to_string(IncrementMethod m) noexcept { return m == IncrementMethod::Direct ? "DIRECT" : "STAR"; }

namespace {

SeriesValue direct_increment(const AngularPowerSpectrum& spec, double v, std::size_t N) {
  const double half = std::sin(0.5 * v);
  ComplementStepper d(spec.lambda(), half * half);
  Accumulator acc;
  std::vector<double> a(kBlock);
  for (std::size_t start = 0; start <= N; start += kBlock) {
    const std::size_t len = std::min(kBlock, N + 1 - start);
    spec.coefficients(start, std::span<double>(a.data(), len));
    for (std::size_t i = 0; i < len; ++i) acc.add(a[i] * d.next());
  }
  SeriesValue out;
  out.degree = N;
  out.bound = spec.tail_sum(N + 1);
  out.value = std::clamp(acc.value() + out.bound, 0.0, 2.0);
  return out;
}

// Partial summation through the Jacobi difference identity:
//   I = (2 s / (alpha + 1)) sum_{n >= 0} (n + alpha + 1) A_{n+1} R_n^{(alpha+1, beta)}(cos v).
// Truncating after n = N leaves sum_{n > N} a_n (W_{N+1} - W_n); its midpoint
// estimate adds A_{N+1} W_{N+1}.
SeriesValue star_increment(const AngularPowerSpectrum& spec, double v, std::size_t N) {
  if (spec.lambda().is_infinite()) {
    throw UnsupportedError("the Jacobi partial-summation path needs a finite lambda");
  }
  const double alpha = spec.lambda().value() - 0.5;
  const double x = std::cos(v);
  const double half = std::sin(0.5 * v);
  const double s = half * half;

  // Suffix masses A_1..A_{N+1}, accumulated backwards from the tail.
  std::vector<double> mass(N + 2);
  const double tail = spec.tail_sum(N + 1);
  mass[N + 1] = tail;
  Accumulator back;
  back.add(tail);
  for (std::size_t n = N + 1; n-- > 1;) {
    back.add(spec.coefficient(n));
    mass[n] = back.value();
  }

  JacobiStepper r(JacobiPair(alpha + 1.0, alpha), x);
  Accumulator acc;
  for (std::size_t n = 0; n <= N; ++n) acc.add((n + alpha + 1.0) * mass[n + 1] * r.next());
  GegenbauerStepper w(spec.lambda(), x);
  double w_next = 1.0;
  for (std::size_t n = 0; n <= N + 1; ++n) w_next = w.next();

  SeriesValue out;
  out.degree = N;
  out.bound = tail;
  out.value = std::clamp(2.0 * s / (alpha + 1.0) * acc.value() + tail * w_next, 0.0, 2.0);
  return out;
}

}  // namespace

SeriesValue incremental_variance(const AngularPowerSpectrum& spec, double v, double tol, IncrementMethod method,
                                 std::size_t cap) {
  if (!std::isfinite(v) || v < 0.0 || v > std::numbers::pi + 1e-15) {
    throw DomainError("angle must lie in [0, pi]");
  }
  check_tolerance(tol);
  v = std::min(v, std::numbers::pi);
  if (v == 0.0) return SeriesValue{0.0, 0.0, 0};
  const std::size_t N = truncation_degree(spec, tol, cap);
  return method == IncrementMethod::Direct ? direct_increment(spec, v, N) : star_increment(spec, v, N);
}

SeriesValue incremental_variance_at_degree(const AngularPowerSpectrum& spec, double v, std::size_t N) {
  if (!std::isfinite(v) || v < 0.0 || v > std::numbers::pi + 1e-15) {
    throw DomainError("angle must lie in [0, pi]");
  }
  if (v == 0.0) return SeriesValue{0.0, 0.0, N};
  return direct_increment(spec, std::min(v, std::numbers::pi), N);
}

double i_c_convert(double c_at_one, double value, ConvertDirection direction) {
  return direction == ConvertDirection::CToI ? 2.0 * (c_at_one - value) : c_at_one - 0.5 * value;
}

SeriesValue bp_cov(const SpaceTimeCovarianceModel& model, double cosangle, double dt, double tol, std::size_t cap) {
  check_cosine(cosangle);
  check_tolerance(tol);
  if (!std::isfinite(dt)) throw DomainError("time lag must be finite");
  const AngularPowerSpectrum& spec = model.spectrum();
  const double c = spec.scale();
  const double weight = c * model.max_c_squared();
  const std::size_t N = truncation_degree(spec, tol / weight, cap);
  GegenbauerStepper w(spec.lambda(), cosangle);
  Accumulator acc;
  std::vector<double> a(kBlock);
  const std::size_t explicit_degrees = std::max(model.temporal().size(), model.c_l().size());
  const double last_factor = [&] {
    const double cl = model.c_for(explicit_degrees);
    return cl * cl * model.temporal_for(explicit_degrees)(dt);
  }();
  for (std::size_t start = 0; start <= N; start += kBlock) {
    const std::size_t len = std::min(kBlock, N + 1 - start);
    spec.coefficients(start, std::span<double>(a.data(), len));
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t n = start + i;
      double factor = last_factor;
      if (n < explicit_degrees) {
        const double cl = model.c_for(n);
        factor = cl * cl * model.temporal_for(n)(dt);
      }
      acc.add(a[i] * factor * w.next());
    }
  }
  SeriesValue out;
  out.degree = N;
  out.value = c * acc.value();
  out.bound = weight * spec.tail_sum(N + 1);
  return out;
}

CovarianceTable::CovarianceTable(const AngularPowerSpectrum& spec, double tol, std::size_t cap)
    : lambda_(spec.lambda()), scale_(spec.scale()) {
  check_tolerance(tol);
  const std::size_t N = truncation_degree(spec, tol / scale_, cap);
  coeffs_.resize(N + 1);
  spec.coefficients(0, coeffs_);
  bound_ = scale_ * spec.tail_sum(N + 1);
  normalized_ = spec.is_normalized();
}

double CovarianceTable::operator()(double t) const {
  check_cosine(t);
  if (t == 1.0 && normalized_) return scale_;
  GegenbauerStepper w(lambda_, t);
  Accumulator acc;
  for (double a : coeffs_) acc.add(a * w.next());
  return scale_ * acc.value();
}

std::pair<Eigen::MatrixXd, double> psd_factor(const Eigen::MatrixXd& m, JitterPolicy policy) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) throw DomainError("covariance matrix must be square and nonempty");
  const double max_diag = m.diagonal().maxCoeff();

  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return {llt.matrixL(), 0.0};

  // Semidefinite input: M = P^T L D L^T P with D >= 0 up to rounding.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd d = ldlt.vectorD();
    const double floor = -1e-10 * std::max(max_diag, 1e-300);
    if (d.minCoeff() >= floor) {
      d = d.cwiseMax(0.0).cwiseSqrt();
      Eigen::MatrixXd l = ldlt.matrixL();
      Eigen::MatrixXd f = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
      return {f, 0.0};
    }
  }

  double jitter = 0.0;
  if (policy.automatic) {
    jitter = 1e-12 * std::max(max_diag, 1e-300);
    while (jitter <= policy.max_jitter) {
      Eigen::MatrixXd shifted = m;
      shifted.diagonal().array() += jitter;
      Eigen::LLT<Eigen::MatrixXd> attempt(shifted);
      if (attempt.info() == Eigen::Success) return {attempt.matrixL(), jitter};
      jitter *= 2.0;
    }
    jitter /= 2.0;
  }
  throw NotPositiveDefiniteError("covariance matrix is not positive semidefinite", jitter);
}

namespace {

CovMatrix finish(Eigen::MatrixXd m, JitterPolicy policy) {
  CovMatrix out;
  if (!policy.factorize) {
    out.matrix = std::move(m);
    return out;
  }
  auto [factor, jitter] = psd_factor(m, policy);
  out.matrix = std::move(m);
  out.factor = std::move(factor);
  out.jitter_added = jitter;
  return out;
}

}  // namespace

CovMatrix cov_matrix(const AngularPowerSpectrum& spec, const std::vector<SpherePoint>& points, double tol,
                     JitterPolicy policy) {
  if (points.empty()) throw DomainError("point list is empty");
  const int d = points.front().dimension();
  for (const auto& p : points) {
    if (p.dimension() != d) throw DomainError("points have inconsistent dimensions");
  }
  if (spec.dimension() && *spec.dimension() != d) {
    throw DomainError("point dimension does not match the spectrum dimension");
  }
  const CovarianceTable table(spec, tol);
  const std::size_t n = points.size();
  // Inner products are quantized to 1e-14 so that repeated angles (grids,
  // great circles) share one series evaluation.
  std::vector<long long> keys(n * n, 0);
  std::map<long long, double> values;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const long long key = std::llround(cos_angle(points[i], points[j]) * 1e14);
      keys[i * n + j] = key;
      values.emplace(key, 0.0);
    }
  }
  std::vector<std::pair<const long long, double>*> slots;
  slots.reserve(values.size());
  for (auto& kv : values) slots.push_back(&kv);
  parallel_for(slots.size(), [&](std::size_t k) {
    const double x = std::clamp(static_cast<double>(slots[k]->first) * 1e-14, -1.0, 1.0);
    slots[k]->second = table(x);
  });
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = table(1.0);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = values.at(keys[i * n + j]);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return finish(std::move(m), policy);
}

CovMatrix cov_matrix(const SpaceTimeCovarianceModel& model, const std::vector<SpaceTimePoint>& points, double tol,
                     JitterPolicy policy) {
  if (points.empty()) throw DomainError("point list is empty");
  const int d = points.front().x.dimension();
  for (const auto& p : points) {
    if (p.x.dimension() != d) throw DomainError("points have inconsistent dimensions");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(n, n);
  parallel_for(points.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double cosang = i == j ? 1.0 : cos_angle(points[i].x, points[j].x);
      const double v = bp_cov(model, cosang, points[i].t - points[j].t, tol).value;
      m(i, j) = v;
      m(j, i) = v;
    }
  });
  return finish(std::move(m), policy);
}

}  // namespace sgrf
