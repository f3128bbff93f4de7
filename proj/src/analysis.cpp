#include "sphgrf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "asymptotic.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/parallel.hpp"

namespace sgrf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kNodesPerOctave = 3;
constexpr int kRatioOctaves = 10;
constexpr double kRatioThreshold = 0.999;

void check_grid(const std::vector<double>& v_grid, double v_max) {
  if (v_grid.empty()) throw DomainError("angle grid is empty");
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (!(v_grid[i] > 0.0) || v_grid[i] > v_max) {
      throw DomainError("grid angles must lie in (0, " + std::to_string(v_max) + "]");
    }
    if (i > 0 && !(v_grid[i] < v_grid[i - 1])) throw DomainError("grid angles must be strictly decreasing");
  }
}

TailDescriptor require_power_tail(const AngularPowerSpectrum& spec) {
  const TailDescriptor tail = spec.tail();
  if (tail.kind != TailKind::Power) throw DomainError("operation needs a spectrum with a power-law tail");
  return tail;
}

// Dyadic convergence rule on octave integrals: convergent when the trailing
// ratios all fall below the threshold or the integrals underflow.
bool dyadic_converges(const std::vector<double>& sums, std::vector<double>& ratios) {
  ratios.clear();
  const std::size_t J = sums.size();
  const std::size_t first = J > kRatioOctaves + 1 ? J - kRatioOctaves - 1 : 0;
  bool underflow = false;
  bool below = true;
  for (std::size_t j = first; j + 1 < J; ++j) {
    if (sums[j] == 0.0 || sums[j + 1] == 0.0) {
      underflow = true;
      continue;
    }
    const double r = sums[j + 1] / sums[j];
    ratios.push_back(r);
    if (!(r < kRatioThreshold)) below = false;
  }
  return underflow || below;
}

bool is_constant_field(const AngularPowerSpectrum& spec) {
  if (spec.has_tail()) return false;
  const auto head = spec.head();
  return std::all_of(head.begin() + 1, head.end(), [](double a) { return a == 0.0; });
}

}  // namespace

double malyarenko_constant(double lambda, double gamma) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and positive");
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("gamma must lie in (0, 2)");
  if (lambda + 0.5 - 0.5 * gamma < 1e-8) throw DomainError("lambda + 1/2 - gamma/2 is too close to a pole");
  const double h = lambda + 0.5;
  return std::exp(std::lgamma(h) + std::lgamma(1.0 - 0.5 * gamma) - gamma * std::numbers::ln2 -
                  std::lgamma(h + 0.5 * gamma));
}

RatioSeries malyarenko_ratio(const AngularPowerSpectrum& spec, const std::vector<double>& v_grid, std::size_t cap) {
  const TailDescriptor tail = require_power_tail(spec);
  if (spec.lambda().is_infinite()) throw DomainError("the Malyarenko asymptote needs a finite lambda");
  check_grid(v_grid, 0.1);
  const double K = malyarenko_constant(spec.lambda().value(), tail.gamma);
  RatioSeries out;
  out.v = v_grid;
  const std::size_t m = v_grid.size();
  out.measured.resize(m);
  out.predicted.resize(m);
  out.ratios.resize(m);
  out.bounds.resize(m);
  out.degrees.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = v_grid[i];
    out.predicted[i] = K * tail.amplitude * std::pow(v, tail.gamma) * std::pow(std::log(1.0 / v), -tail.k);
  }
  parallel_for(m, [&](std::size_t i) {
    const SeriesValue s = incremental_variance(spec, v_grid[i], 0.01 * out.predicted[i], IncrementMethod::Direct, cap);
    out.measured[i] = s.value;
    out.bounds[i] = s.bound;
    out.degrees[i] = s.degree;
    out.ratios[i] = s.value / out.predicted[i];
  });
  return out;
}

SeriesValue hilbert_increment(const AngularPowerSpectrum& spec, double v, double target, std::size_t cap) {
  if (!(v > 0.0) || v > std::numbers::pi / 2) throw DomainError("angle must lie in (0, pi/2]");
  if (!(target > 0.0)) throw DomainError("target must be positive");
  const double log_x = std::log(std::cos(v));
  // (cos v)^{N+1} <= 1e-16 * target; a finite spectrum is summed exactly.
  const double needed = !spec.has_tail() ? static_cast<double>(spec.head_degree())
                                         : std::ceil(std::log(1e-16 * std::min(target, 1.0)) / log_x);
  if (!(needed < static_cast<double>(cap))) {
    throw TruncationError("geometric truncation needs more than " + std::to_string(cap) + " terms",
                          std::exp(static_cast<double>(cap) * log_x),
                          needed < 1.8e19 ? static_cast<std::size_t>(needed) : 0);
  }
  const std::size_t N = std::max<std::size_t>(static_cast<std::size_t>(needed), spec.head_degree());
  const double half = std::sin(0.5 * v);
  ComplementStepper d(GegenbauerIndex::infinite(), half * half);
  double sum = 0.0;
  double comp = 0.0;
  std::vector<double> a(4096);
  for (std::size_t start = 0; start <= N; start += a.size()) {
    const std::size_t len = std::min(a.size(), N + 1 - start);
    spec.coefficients(start, std::span<double>(a.data(), len));
    for (std::size_t i = 0; i < len; ++i) {
      const double term = a[i] * d.next();
      const double t = sum + term;
      comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
  }
  // The dropped terms a_n (1 - x^n) lie between A_{N+1} (1 - x^{N+1}) and A_{N+1}.
  const double mass = spec.tail_sum(N + 1);
  const double xn = std::exp(static_cast<double>(N + 1) * log_x);
  SeriesValue out;
  out.degree = N;
  out.value = sum + comp + mass * (1.0 - 0.5 * xn);
  out.bound = 0.5 * mass * xn;
  return out;
}

RatioSeries hilbert_ratio(const AngularPowerSpectrum& spec, const std::vector<double>& v_grid, std::size_t cap) {
  const TailDescriptor tail = require_power_tail(spec);
  const double e = tail.gamma;
  if (!(e > 0.0 && e < 1.0)) throw DomainError("Hilbert-sphere asymptote needs a tail exponent in (0, 1)");
  check_grid(v_grid, 0.1);
  const double constant = std::exp(std::lgamma(1.0 - e) - e * std::numbers::ln2);
  RatioSeries out;
  out.v = v_grid;
  const std::size_t m = v_grid.size();
  out.measured.resize(m);
  out.predicted.resize(m);
  out.ratios.resize(m);
  out.bounds.resize(m);
  out.degrees.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = v_grid[i];
    out.predicted[i] =
        constant * tail.amplitude * std::pow(v, 2.0 * e) * std::pow(std::log(1.0 / (v * v)), -tail.k);
  }
  parallel_for(m, [&](std::size_t i) {
    const SeriesValue s = hilbert_increment(spec, v_grid[i], out.predicted[i], cap);
    out.measured[i] = s.value;
    out.bounds[i] = s.bound;
    out.degrees[i] = s.degree;
    out.ratios[i] = s.value / out.predicted[i];
  });
  return out;
}

double jacobi_difference_check(int n, JacobiPair jp, double theta) {
  if (n < 0) throw DomainError("degree must be >= 0");
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  const double x = std::cos(theta);
  const std::vector<double> r = jacobi_r_sequence(jp, x, n + 1);
  const double lhs = r[n] - r[n + 1];
  const double half = std::sin(0.5 * theta);
  const double rhs = (2.0 * n + jp.alpha + jp.beta + 2.0) / (jp.alpha + 1.0) * half * half *
                     jacobi_r(n, JacobiPair(jp.alpha + 1.0, jp.beta), x);
  return std::abs(lhs - rhs);
}

const char* to_string(Continuity c) noexcept {
  switch (c) {
    case Continuity::Continuous: return "CONTINUOUS";
    case Continuity::Discontinuous: return "DISCONTINUOUS";
    case Continuity::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

namespace {

Continuity analytic_continuity(const AngularPowerSpectrum& spec) {
  if (is_constant_field(spec)) return Continuity::Continuous;
  if (spec.lambda().is_infinite()) return Continuity::Discontinuous;
  const TailDescriptor tail = spec.tail();
  switch (tail.kind) {
    case TailKind::None:
    case TailKind::Geometric:
    case TailKind::Power:
      return Continuity::Continuous;
    case TailKind::LogOnly:
      return tail.k > 1.0 ? Continuity::Continuous : Continuity::Discontinuous;
  }
  return Continuity::Indeterminate;
}

// Gauss-Legendre nodes on [-1, 1] with weights summing to 2.
struct OctaveRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

OctaveRule octave_rule() {
  const QuadratureRule q = gauss_gegenbauer(0.5, kNodesPerOctave);
  OctaveRule r{q.nodes, q.weights};
  for (double& w : r.weights) w *= 2.0;
  return r;
}

}  // namespace

DudleyReport dudley_classify(const AngularPowerSpectrum& spec, int octaves) {
  if (octaves < kRatioOctaves + 2) throw DomainError("too few octaves for the dyadic diagnostic");
  DudleyReport report;
  report.analytic = analytic_continuity(spec);
  if (spec.lambda().is_infinite() && !is_constant_field(spec)) {
    // The dyadic integral is not a continuity criterion on the Hilbert sphere.
    report.numeric = Continuity::Indeterminate;
    report.numeric_value = kInf;
    report.agree = false;
    return report;
  }
  if (is_constant_field(spec)) {
    report.numeric = Continuity::Continuous;
    report.octave_sums.assign(static_cast<std::size_t>(octaves), 0.0);
    report.numeric_value = 0.0;
    report.agree = report.analytic == report.numeric;
    return report;
  }

  // Octave j covers u in [2^{-j-1}, 2^{-j}]. With w = sqrt(-log u) the
  // integral of sqrt(I(u)/(-log u)) du/u becomes the integral of 2 sqrt(I) dw.
  const detail::IncrementEvaluator eval(spec);
  const OctaveRule rule = octave_rule();
  const auto J = static_cast<std::size_t>(octaves);
  const std::size_t K = rule.nodes.size();
  std::vector<double> w_nodes(J * K);
  std::vector<double> values(J * K);
  for (std::size_t j = 0; j < J; ++j) {
    const double wa = std::sqrt(j * std::numbers::ln2);
    const double wb = std::sqrt((j + 1.0) * std::numbers::ln2);
    for (std::size_t i = 0; i < K; ++i) w_nodes[j * K + i] = 0.5 * (wa + wb) + 0.5 * (wb - wa) * rule.nodes[i];
  }
  parallel_for(J * K, [&](std::size_t idx) {
    const double w = w_nodes[idx];
    values[idx] = std::max(0.0, eval(-w * w));
  });
  // Running maximum from the smallest angle upward (largest w first).
  double envelope = 0.0;
  for (std::size_t idx = J * K; idx-- > 0;) {
    envelope = std::max(envelope, values[idx]);
    values[idx] = envelope;
  }
  report.octave_sums.resize(J);
  double total = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const double wa = std::sqrt(j * std::numbers::ln2);
    const double wb = std::sqrt((j + 1.0) * std::numbers::ln2);
    double s = 0.0;
    for (std::size_t i = 0; i < K; ++i) s += rule.weights[i] * 2.0 * std::sqrt(values[j * K + i]);
    s *= 0.5 * (wb - wa);
    report.octave_sums[j] = s;
    total += s;
  }
  const bool converges = dyadic_converges(report.octave_sums, report.last_ratios);
  report.numeric = converges ? Continuity::Continuous : Continuity::Discontinuous;
  report.numeric_value = converges ? total : kInf;
  report.agree = report.analytic == report.numeric;
  return report;
}

const char* to_string(Integrability i) noexcept { return i == Integrability::Finite ? "FINITE" : "DIVERGENT"; }

IntegrabilityReport integrability_check(const AngularPowerSpectrum& spec, double gamma, int octaves) {
  if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("integrability exponent must lie in (0, 2)");
  if (octaves < kRatioOctaves + 2) throw DomainError("too few octaves for the dyadic diagnostic");
  IntegrabilityReport report;
  report.summability = summability_check(spec, gamma);
  if (is_constant_field(spec)) {
    report.decision = Integrability::Finite;
    report.value = 0.0;
    report.agree = report.summability == Summability::Converges;
    return report;
  }
  if (spec.lambda().is_infinite()) throw UnsupportedError("integrability check needs a finite lambda");

  // Octave j covers theta in [2^{-j-1} pi/2, 2^{-j} pi/2]; integrate in log theta.
  const detail::IncrementEvaluator eval(spec);
  const OctaveRule rule = octave_rule();
  const auto J = static_cast<std::size_t>(octaves);
  const std::size_t K = rule.nodes.size();
  const double top = std::log(0.5 * std::numbers::pi);
  std::vector<double> log_theta(J * K);
  std::vector<double> values(J * K);
  for (std::size_t j = 0; j < J; ++j) {
    const double b = top - j * std::numbers::ln2;
    const double a = b - std::numbers::ln2;
    for (std::size_t i = 0; i < K; ++i) log_theta[j * K + i] = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
  }
  parallel_for(J * K, [&](std::size_t idx) {
    values[idx] = std::exp(eval.log_value(log_theta[idx]) - gamma * log_theta[idx]);
  });
  std::vector<double> sums(J);
  double total = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < K; ++i) s += rule.weights[i] * values[j * K + i];
    sums[j] = 0.5 * std::numbers::ln2 * s;
    total += sums[j];
  }
  const bool converges = dyadic_converges(sums, report.last_ratios);
  report.decision = converges ? Integrability::Finite : Integrability::Divergent;
  report.value = converges ? total : kInf;
  report.ratio_at_largest = values.front();
  report.ratio_at_smallest = values.back();
  report.agree = converges == (report.summability == Summability::Converges);
  return report;
}

MomentReport moment_bound_check(const AngularPowerSpectrum& spec, int n,
                                const std::vector<std::pair<SpherePoint, SpherePoint>>& pairs, int replicates,
                                const RngSpec& rng, double gamma, double tol) {
  if (n < 1) throw DomainError("moment order must be >= 1");
  if (replicates < 2) throw DomainError("moment check needs at least 2 replicates");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const CovarianceTable table(spec, tol);
  const double c = spec.scale();
  double double_factorial = 1.0;
  for (int k = 2 * n - 1; k > 1; k -= 2) double_factorial *= k;

  MomentReport report;
  report.pairs.resize(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [x, y] = pairs[p];
    MomentPair& out = report.pairs[p];
    const double cosang = cos_angle(x, y);
    out.angle = std::acos(cosang);
    if (out.angle == 0.0) {
      out.ratio = 1.0;
      continue;
    }
    const double cov = table(cosang);
    Eigen::Matrix2d m;
    m << c, cov, cov, c;
    const Eigen::MatrixXd f = psd_factor(m, JitterPolicy::none()).first;
    const double increment_var = 2.0 * (c - cov);  // 2 c I
    out.gaussian_moment = double_factorial * std::pow(increment_var, n);

    std::vector<double> powers(static_cast<std::size_t>(replicates));
    parallel_for(powers.size(), [&](std::size_t r) {
      std::normal_distribution<double> normal;
      auto engine = make_engine(rng, r, p);
      const double z1 = normal(engine);
      const double z2 = normal(engine);
      const double xv = f(0, 0) * z1 + f(0, 1) * z2;
      const double yv = f(1, 0) * z1 + f(1, 1) * z2;
      powers[r] = std::pow(xv - yv, 2 * n);
    });
    double mean = 0.0;
    for (double v : powers) mean += v;
    mean /= replicates;
    double var = 0.0;
    for (double v : powers) var += (v - mean) * (v - mean);
    var /= replicates - 1;
    out.moment = mean;
    out.standard_error = std::sqrt(var / replicates);
    out.ratio = out.gaussian_moment > 0.0 ? mean / out.gaussian_moment : 1.0;
    out.z_score = out.standard_error > 0.0 ? (mean - out.gaussian_moment) / out.standard_error : 0.0;
    out.bound_ratio = mean / std::pow(out.angle, gamma * n);
    report.max_bound_ratio = std::max(report.max_bound_ratio, out.bound_ratio);
  }
  return report;
}

std::vector<SpherePoint> great_circle_points(int count, int d) {
  if (count < 2) throw DomainError("a great circle needs at least 2 points");
  if (d < 2) throw DomainError("sphere dimension must be >= 2");
  std::vector<SpherePoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / count;
    std::vector<double> coords(static_cast<std::size_t>(d) + 1, 0.0);
    coords[0] = std::cos(phi);
    coords[1] = std::sin(phi);
    points.push_back(SpherePoint::normalized(std::move(coords)));
  }
  return points;
}

VariogramReport variogram_holder(const FieldSample& sample) {
  const std::size_t P = sample.points.size();
  if (P < 8) throw DomainError("variogram needs at least 8 circle points");
  if (sample.replicates() < 1000) throw DomainError("variogram needs at least 1000 replicates");
  if (static_cast<std::size_t>(sample.values.cols()) < P) throw DomainError("sample has fewer values than points");
  // Equal spacing on one closed great circle.
  const double spacing = geodesic_angle(sample.points[0], sample.points[1]);
  for (std::size_t i = 0; i < P; ++i) {
    const double h = geodesic_angle(sample.points[i], sample.points[(i + 1) % P]);
    if (std::abs(h - spacing) > 1e-9) throw DomainError("points are not equally spaced on a closed great circle");
  }
  if (std::abs(spacing * P - 2.0 * std::numbers::pi) > 1e-6) {
    throw DomainError("points do not close a great circle");
  }

  VariogramReport report;
  const std::size_t max_lag = P / 2;
  report.lags.resize(max_lag);
  report.vhat.resize(max_lag);
  const Eigen::MatrixXd values = sample.values.leftCols(static_cast<Eigen::Index>(P));
  parallel_for(max_lag, [&](std::size_t k0) {
    const std::size_t k = k0 + 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      sum += (values.col(static_cast<Eigen::Index>((i + k) % P)) - values.col(static_cast<Eigen::Index>(i)))
                 .squaredNorm();
    }
    report.lags[k0] = k * spacing;
    report.vhat[k0] = sum / (static_cast<double>(P) * values.rows());
  });

  if (std::all_of(report.vhat.begin(), report.vhat.end(), [](double v) { return v == 0.0; })) {
    report.degenerate = true;
    report.gamma_in_range = false;
    return report;
  }
  // Smallest decade of lags: h in [h_1, 10 h_1].
  for (std::size_t k0 = 0; k0 < max_lag && k0 < 10; ++k0) {
    if (report.vhat[k0] > 0.0) report.window.push_back(k0);
  }
  if (report.window.size() < 4) throw DomainError("fewer than 4 usable lag bins for the variogram fit");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k0 : report.window) {
    mx += std::log(report.lags[k0]);
    my += std::log(report.vhat[k0]);
  }
  mx /= report.window.size();
  my /= report.window.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k0 : report.window) {
    const double dx = std::log(report.lags[k0]) - mx;
    sxy += dx * (std::log(report.vhat[k0]) - my);
    sxx += dx * dx;
  }
  report.gamma_hat = sxy / sxx;
  report.holder_bound = 0.5 * report.gamma_hat;
  report.gamma_in_range = report.gamma_hat >= 0.0 && report.gamma_hat <= 2.0;
  return report;
}

double langschwab_gamma_sup(const AngularPowerSpectrum& spec) {
  const TailDescriptor tail = spec.tail();
  switch (tail.kind) {
    case TailKind::None:
    case TailKind::Geometric:
      return kInf;
    case TailKind::LogOnly:
      return 0.0;
    case TailKind::Power:
      return tail.gamma;
  }
  return 0.0;
}

RegularityReport regularity_report(const AngularPowerSpectrum& spec, const VariogramReport* variogram) {
  RegularityReport report;
  const DudleyReport dudley = dudley_classify(spec);
  report.dudley = dudley.analytic;
  report.dudley_numeric_decision = dudley.numeric;
  if (std::isfinite(dudley.numeric_value)) report.dudley_numeric = dudley.numeric_value;
  report.langschwab_gamma_sup = langschwab_gamma_sup(spec);
  if (variogram != nullptr && !variogram->degenerate) report.gamma_hat = variogram->gamma_hat;
  // Hoelder exponents below gamma/2 for gamma in (0, 2].
  if (report.langschwab_gamma_sup > 0.0) {
    report.holder_bound = 0.5 * std::min(report.langschwab_gamma_sup, 2.0);
  } else if (report.gamma_hat) {
    report.holder_bound = 0.5 * *report.gamma_hat;
  }
  return report;
}

}  // namespace sgrf
