#include "sphgrf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "sphgrf/error.hpp"
#include "sphgrf/parallel.hpp"

namespace sgrf {

namespace {

constexpr Eigen::Index kReplicateBlock = 512;

void check_counts(int L, int replicates) {
  if (L < 0) throw DomainError("truncation degree L must be >= 0");
  if (replicates < 1) throw DomainError("replicate count must be >= 1");
}

void check_s2_points(const std::vector<SpherePoint>& points) {
  if (points.empty()) throw DomainError("point list is empty");
  for (const auto& p : points) {
    if (p.dimension() != 2) throw UnsupportedError("spherical-harmonic samplers need points on S^2");
  }
}

std::size_t harmonic_count(int L) { return static_cast<std::size_t>(L + 1) * static_cast<std::size_t>(L + 1); }

// P x (L+1)^2 matrix of Y_{lm}(p_i).
Eigen::MatrixXd harmonic_basis(const std::vector<SpherePoint>& points, int L) {
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(harmonic_count(L)));
  parallel_for(points.size(), [&](std::size_t i) {
    const std::vector<double> y = real_sph_harm_all(L, points[i]);
    for (std::size_t h = 0; h < y.size(); ++h) basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h)) = y[h];
  });
  return basis;
}

// Per-degree N(0, 1) draws for one replicate, in harmonic index order.
void draw_coefficients(const RngSpec& rng, std::uint64_t replicate, int L, double* out) {
  std::normal_distribution<double> normal;
  for (int l = 0; l <= L; ++l) {
    auto engine = make_engine(rng, replicate, static_cast<std::uint64_t>(l));
    double* row = out + static_cast<std::size_t>(l) * l;
    for (int j = 0; j < 2 * l + 1; ++j) row[j] = normal(engine);
  }
}

}  // namespace

const char* to_string(SampleMethod m) noexcept {
  switch (m) {
    case SampleMethod::KL: return "KL";
    case SampleMethod::Cholesky: return "CHOLESKY";
    case SampleMethod::SpacetimeKL: return "SPACETIME_KL";
    case SampleMethod::LiteralTxt: return "LITERAL_TXT";
  }
  return "UNKNOWN";
}

FieldSample sample_kl_sphere(const AngularPowerSpectrum& spec, int L, const std::vector<SpherePoint>& points,
                             int replicates, const RngSpec& rng) {
  check_counts(L, replicates);
  check_s2_points(points);
  if (spec.dimension() != 2) throw UnsupportedError("KL sampler needs a spectrum on S^2");
  const VarianceSpectrum vs = aps_to_variances(spec, L);

  Eigen::MatrixXd basis = harmonic_basis(points, L);
  for (int l = 0; l <= L; ++l) {
    const double sd = std::sqrt(vs.v[l]);
    for (int j = 0; j < 2 * l + 1; ++j) basis.col(static_cast<Eigen::Index>(l) * l + j) *= sd;
  }

  FieldSample out;
  out.points = points;
  out.seed = rng.seed;
  out.stream = rng.stream;
  out.truncation_L = L;
  out.method = SampleMethod::KL;
  out.values.resize(replicates, static_cast<Eigen::Index>(points.size()));

  const auto H = static_cast<Eigen::Index>(harmonic_count(L));
  for (Eigen::Index r0 = 0; r0 < replicates; r0 += kReplicateBlock) {
    const Eigen::Index rb = std::min<Eigen::Index>(kReplicateBlock, replicates - r0);
    Eigen::MatrixXd z(H, rb);
    parallel_for(static_cast<std::size_t>(rb), [&](std::size_t j) {
      draw_coefficients(rng, static_cast<std::uint64_t>(r0) + j, L, z.col(static_cast<Eigen::Index>(j)).data());
    });
    out.values.middleRows(r0, rb).noalias() = (basis * z).transpose();
  }
  return out;
}

FieldSample sample_spacetime(const SpaceTimeCovarianceModel& model, int L, const std::vector<SpherePoint>& points,
                             const std::vector<double>& times, int replicates, const RngSpec& rng) {
  check_counts(L, replicates);
  check_s2_points(points);
  if (times.empty()) throw DomainError("time grid is empty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("times must be strictly increasing");
  }
  const AngularPowerSpectrum& spec = model.spectrum();
  if (spec.dimension() != 2) throw UnsupportedError("spatio-temporal sampler needs a spectrum on S^2");
  const VarianceSpectrum vs = aps_to_variances(spec, L);
  const auto T = static_cast<Eigen::Index>(times.size());

  // Toeplitz factors, shared between degrees with the same temporal law.
  std::map<std::pair<int, double>, std::shared_ptr<const Eigen::MatrixXd>> cache;
  std::vector<std::shared_ptr<const Eigen::MatrixXd>> factors(static_cast<std::size_t>(L) + 1);
  std::vector<double> sd(static_cast<std::size_t>(L) + 1);
  double jitter = 0.0;
  for (int l = 0; l <= L; ++l) {
    const TemporalCF& cf = model.temporal_for(l);
    const auto key = std::make_pair(static_cast<int>(cf.kind), cf.b);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Eigen::MatrixXd m(T, T);
      for (Eigen::Index i = 0; i < T; ++i) {
        for (Eigen::Index j = 0; j < T; ++j) m(i, j) = cf(times[i] - times[j]);
      }
      auto [f, added] = psd_factor(m, JitterPolicy::autojitter(1e-6));
      jitter = std::max(jitter, added);
      it = cache.emplace(key, std::make_shared<const Eigen::MatrixXd>(std::move(f))).first;
    }
    factors[l] = it->second;
    const double cl = model.c_for(l);
    sd[l] = std::sqrt(vs.v[l]) * cl;
  }

  const Eigen::MatrixXd basis = harmonic_basis(points, L);
  const auto P = static_cast<Eigen::Index>(points.size());
  const auto H = static_cast<Eigen::Index>(harmonic_count(L));

  FieldSample out;
  out.points = points;
  out.times = times;
  out.seed = rng.seed;
  out.stream = rng.stream;
  out.truncation_L = L;
  out.method = SampleMethod::SpacetimeKL;
  out.jitter_added = jitter;
  out.values.resize(replicates, P * T);

  parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t r) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd series(H, T);
    Eigen::VectorXd xi(T);
    for (int l = 0; l <= L; ++l) {
      auto engine = make_engine(rng, r, static_cast<std::uint64_t>(l));
      const Eigen::MatrixXd& f = *factors[l];
      for (int j = 0; j < 2 * l + 1; ++j) {
        for (Eigen::Index k = 0; k < T; ++k) xi(k) = normal(engine);
        series.row(static_cast<Eigen::Index>(l) * l + j) = (sd[l] * (f * xi)).transpose();
      }
    }
    const Eigen::MatrixXd field = basis * series;  // P x T
    for (Eigen::Index k = 0; k < T; ++k) {
      out.values.row(static_cast<Eigen::Index>(r)).segment(k * P, P) = field.col(k).transpose();
    }
  });
  return out;
}

FieldSample sample_cholesky(const CovMatrix& cov, int replicates, const RngSpec& rng,
                            std::vector<SpherePoint> points) {
  if (replicates < 1) throw DomainError("replicate count must be >= 1");
  const Eigen::Index n = cov.factor.rows();
  if (n == 0 || cov.factor.cols() != n) throw DomainError("covariance factor is missing or not square");
  if (!points.empty() && static_cast<Eigen::Index>(points.size()) != n) {
    throw DomainError("point list does not match the covariance size");
  }
  FieldSample out;
  out.points = std::move(points);
  out.seed = rng.seed;
  out.stream = rng.stream;
  out.method = SampleMethod::Cholesky;
  out.jitter_added = cov.jitter_added;
  out.values.resize(replicates, n);
  for (Eigen::Index r0 = 0; r0 < replicates; r0 += kReplicateBlock) {
    const Eigen::Index rb = std::min<Eigen::Index>(kReplicateBlock, replicates - r0);
    Eigen::MatrixXd z(n, rb);
    parallel_for(static_cast<std::size_t>(rb), [&](std::size_t j) {
      std::normal_distribution<double> normal;
      auto engine = make_engine(rng, static_cast<std::uint64_t>(r0) + j, 0);
      for (Eigen::Index i = 0; i < n; ++i) z(i, static_cast<Eigen::Index>(j)) = normal(engine);
    });
    out.values.middleRows(r0, rb).noalias() = (cov.factor * z).transpose();
  }
  return out;
}

LiteralExpansionReport verify_literal_expansion(const SpaceTimeCovarianceModel& model, const SpherePoint& x,
                                                const SpherePoint& y, double s, double t, int L, int replicates,
                                                const RngSpec& rng) {
  check_counts(L, replicates);
  check_s2_points({x, y});
  const AngularPowerSpectrum& spec = model.spectrum();
  if (spec.dimension() != 2) throw UnsupportedError("the literal expansion check needs a spectrum on S^2");
  const VarianceSpectrum vs = aps_to_variances(spec, L);
  const std::vector<double> yx = real_sph_harm_all(L, x);
  const std::vector<double> yy = real_sph_harm_all(L, y);
  const std::vector<double> w = gegenbauer_w_sequence(GegenbauerIndex::finite(0.5), cos_angle(x, y), L);

  std::vector<double> weight_x(static_cast<std::size_t>(L) + 1);
  std::vector<double> weight_y(static_cast<std::size_t>(L) + 1);
  LiteralExpansionReport report;
  for (int l = 0; l <= L; ++l) {
    const double cl = model.c_for(l);
    const TemporalCF& cf = model.temporal_for(l);
    const double sdev = std::sqrt(vs.v[l]);
    weight_x[l] = sdev * cl * cf(s);
    weight_y[l] = sdev * cl * cf(t);
    const double common = vs.v[l] * (2.0 * l + 1.0) / (4.0 * std::numbers::pi) * cl * cl * w[l];
    report.formula_value += common * cf(s) * cf(t);
    report.stationary_value += common * cf(t - s);
  }

  std::vector<double> products(static_cast<std::size_t>(replicates));
  parallel_for(products.size(), [&](std::size_t r) {
    std::vector<double> z(harmonic_count(L));
    draw_coefficients(rng, r, L, z.data());
    double tx = 0.0;
    double ty = 0.0;
    for (int l = 0; l <= L; ++l) {
      double sx = 0.0;
      double sy = 0.0;
      for (int j = 0; j < 2 * l + 1; ++j) {
        const std::size_t h = static_cast<std::size_t>(l) * l + j;
        sx += z[h] * yx[h];
        sy += z[h] * yy[h];
      }
      tx += weight_x[l] * sx;
      ty += weight_y[l] * sy;
    }
    products[r] = tx * ty;
  });

  double mean = 0.0;
  for (double p : products) mean += p;
  mean /= replicates;
  double var = 0.0;
  for (double p : products) var += (p - mean) * (p - mean);
  var /= std::max(1, replicates - 1);
  report.empirical_cov = mean;
  report.standard_error = std::sqrt(var / replicates);
  report.z_score = report.standard_error > 0.0 ? (mean - report.formula_value) / report.standard_error
                                                : (mean == report.formula_value ? 0.0 : INFINITY);
  report.forms_differ = std::abs(report.formula_value - report.stationary_value) > 1e-10;
  return report;
}

}  // namespace sgrf
