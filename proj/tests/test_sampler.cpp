#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "sphgrf/covariance.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/sampler.hpp"
#include "stats.hpp"

using namespace sgrf;

namespace {

AngularPowerSpectrum finite_spectrum(int L) {
  std::vector<double> head(L + 1);
  for (int n = 0; n <= L; ++n) head[n] = 1.0 / ((n + 1.0) * (n + 1.0));
  return normalize(AngularPowerSpectrum(corpus::half(), 1.0, head));
}

std::vector<SpherePoint> few_points() {
  return {SpherePoint::from_angles(0.3, 0.1), SpherePoint::from_angles(1.2, 2.0), SpherePoint::from_angles(2.0, -1.0),
          SpherePoint::from_angles(0.9, 4.0)};
}

// Restores the worker-count variable on scope exit.
struct ThreadEnv {
  explicit ThreadEnv(const char* value) {
    if (const char* old = std::getenv("SPHERE_GRF_THREADS")) saved = old;
    setenv("SPHERE_GRF_THREADS", value, 1);
  }
  ~ThreadEnv() {
    if (saved.empty()) {
      unsetenv("SPHERE_GRF_THREADS");
    } else {
      setenv("SPHERE_GRF_THREADS", saved.c_str(), 1);
    }
  }
  std::string saved;
};

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("identical inputs give bit-identical samples") {
    const auto spec = finite_spectrum(12);
    const auto pts = few_points();
    const FieldSample a = sample_kl_sphere(spec, 12, pts, 300, {7, 0});
    const FieldSample b = sample_kl_sphere(spec, 12, pts, 300, {7, 0});
    CHECK(a.values == b.values);
    const FieldSample c = sample_kl_sphere(spec, 12, pts, 300, {7, 1});
    CHECK(a.values != c.values);
    CHECK(a.truncation_L == 12);
    CHECK(a.method == SampleMethod::KL);
  }

  TEST_CASE("samples do not depend on the worker count") {
    const auto spec = finite_spectrum(10);
    const auto pts = few_points();
    const SpaceTimeCovarianceModel st(spec, {TemporalCF(TemporalKind::Gauss, 0.5)});
    const std::vector<double> times{0.0, 0.5, 1.0};
    const CovMatrix cov = cov_matrix(spec, pts, 1e-10, JitterPolicy::autojitter(1e-8));

    FieldSample kl1, st1, ch1;
    {
      ThreadEnv env("1");
      kl1 = sample_kl_sphere(spec, 10, pts, 257, {3, 0});
      st1 = sample_spacetime(st, 10, pts, times, 257, {3, 0});
      ch1 = sample_cholesky(cov, 257, {3, 0}, pts);
    }
    ThreadEnv env("5");
    CHECK(sample_kl_sphere(spec, 10, pts, 257, {3, 0}).values == kl1.values);
    CHECK(sample_spacetime(st, 10, pts, times, 257, {3, 0}).values == st1.values);
    CHECK(sample_cholesky(cov, 257, {3, 0}, pts).values == ch1.values);
  }

  TEST_CASE("a constant spectrum gives spatially constant fields with variance c") {
    const double c = 2.0;
    const auto pts = few_points();
    const FieldSample s = sample_kl_sphere(corpus::constant().with_scale(c), 0, pts, 20000, {1, 0});
    for (Eigen::Index r = 0; r < s.replicates(); ++r) {
      for (Eigen::Index j = 1; j < s.values.cols(); ++j) CHECK(std::abs(s.values(r, j) - s.values(r, 0)) <= 1e-12);
    }
    CHECK(std::abs(stats::cross_moment(s.values, 0, 0).z(c)) <= 3.0);
  }

  TEST_CASE("mean and variance of the KL sampler") {
    const auto spec = finite_spectrum(20);
    const auto pts = few_points();
    const FieldSample s = sample_kl_sphere(spec, 20, pts, 20000, {2, 0});
    for (Eigen::Index j = 0; j < s.values.cols(); ++j) {
      CHECK(std::abs(s.values.col(j).head(10000).mean()) <= 3.0 * std::sqrt(1.0 / 1e4));
      CHECK(std::abs(stats::cross_moment(s.values, j, j).z(1.0)) <= 3.0);
    }
  }

  TEST_CASE("KL samples are Gaussian") {
    const auto spec = finite_spectrum(8);
    const FieldSample s = sample_kl_sphere(spec, 8, few_points(), 100000, {4, 0});
    for (Eigen::Index j = 0; j < s.values.cols(); ++j) {
      CHECK(std::abs(stats::skewness(s.values.col(j))) <= 0.1);
      CHECK(std::abs(stats::excess_kurtosis(s.values.col(j))) <= 0.2);
    }
  }

  TEST_CASE("KL covariance depends only on the angle") {
    const auto spec = finite_spectrum(15);
    const double angle = 0.8;
    const std::vector<SpherePoint> pts{SpherePoint::from_angles(0.4, 0.0), SpherePoint::from_angles(0.4 + angle, 0.0),
                                       SpherePoint::from_angles(std::numbers::pi / 2, 1.0),
                                       SpherePoint::from_angles(std::numbers::pi / 2, 1.0 + angle)};
    const FieldSample s = sample_kl_sphere(spec, 15, pts, 20000, {5, 0});
    const auto a = stats::cross_moment(s.values, 0, 1);
    const auto b = stats::cross_moment(s.values, 2, 3);
    CHECK(std::abs(stats::difference(a, b).z(0.0)) <= 3.0);
    CHECK(std::abs(a.z(schoenberg_cov(spec, std::cos(angle), 1e-12).value)) <= 3.0);
  }

  TEST_CASE("KL and Cholesky samplers agree") {
    const auto spec = finite_spectrum(20);
    const auto pts = few_points();
    const FieldSample kl = sample_kl_sphere(spec, 20, pts, 20000, {6, 0});
    const CovMatrix cov = cov_matrix(spec, pts, 1e-12, JitterPolicy::autojitter(1e-8));
    const FieldSample ch = sample_cholesky(cov, 20000, {6, 1}, pts);
    CHECK(ch.method == SampleMethod::Cholesky);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = i; j < 4; ++j) {
        const auto d = stats::difference(stats::cross_moment(kl.values, i, j), stats::cross_moment(ch.values, i, j));
        CHECK(std::abs(d.z(0.0)) <= 3.0);
      }
    }
  }

  TEST_CASE("Cholesky sampler on simple matrices") {
    CovMatrix id{Eigen::MatrixXd::Identity(3, 3), 0.0, Eigen::MatrixXd::Identity(3, 3)};
    const FieldSample s = sample_cholesky(id, 20000, {8, 0});
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(std::abs(stats::cross_moment(s.values, i, i).z(1.0)) <= 3.0);
      for (Eigen::Index j = i + 1; j < 3; ++j) CHECK(std::abs(stats::cross_moment(s.values, i, j).z(0.0)) <= 3.0);
    }

    Eigen::MatrixXd ones(2, 2);
    ones << 1, 1, 1, 1;
    CovMatrix rank1{ones, 0.0, psd_factor(ones, JitterPolicy::none()).first};
    const FieldSample r = sample_cholesky(rank1, 1000, {8, 1});
    CHECK((r.values.col(0) - r.values.col(1)).cwiseAbs().maxCoeff() <= 1e-12);

    CovMatrix unfactored{ones, 0.0, Eigen::MatrixXd()};
    CHECK_THROWS(sample_cholesky(unfactored, 10, {8, 2}));
  }

  TEST_CASE("Cholesky sampler on S^4") {
    const AngularPowerSpectrum spec = corpus::power(1.5, 0.0, 1, GegenbauerIndex::finite(1.5));
    std::vector<SpherePoint> pts;
    std::mt19937_64 eng(99);
    std::normal_distribution<double> g;
    for (int i = 0; i < 30; ++i) pts.push_back(SpherePoint::normalized({g(eng), g(eng), g(eng), g(eng), g(eng)}));
    const CovMatrix cov = cov_matrix(spec, pts, 1e-6, JitterPolicy::autojitter(1e-8));
    const FieldSample s = sample_cholesky(cov, 20000, {9, 0}, pts);
    int outside = 0;
    int total = 0;
    for (int i = 0; i < 30; i += 3) {
      for (int j = i; j < 30; j += 4) {
        const double ref = schoenberg_cov(spec, cos_angle(pts[i], pts[j]), 1e-6).value;
        outside += std::abs(stats::cross_moment(s.values, i, j).z(ref)) > 3.0;
        ++total;
      }
    }
    // About 0.3% of honest 3-SE checks fail; allow one.
    CHECK(outside <= 1);
    CHECK(total >= 30);
  }

  TEST_CASE("space-time sampler with one time matches the spatial law") {
    const auto spec = finite_spectrum(10);
    const SpaceTimeCovarianceModel model(spec, {TemporalCF(TemporalKind::Gauss, 1.0)}, {1.5});
    const FieldSample s = sample_spacetime(model, 10, few_points(), {0.0}, 20000, {10, 0});
    CHECK(s.method == SampleMethod::SpacetimeKL);
    const double expected = schoenberg_cov(spec, cos_angle(few_points()[0], few_points()[1]), 1e-12).value * 2.25;
    CHECK(std::abs(stats::cross_moment(s.values, 0, 1).z(expected)) <= 3.0);
    CHECK(std::abs(stats::cross_moment(s.values, 2, 2).z(2.25)) <= 3.0);
  }

  TEST_CASE("space-time sampler temporal correlation for one degree") {
    const double b = 0.8;
    const SpaceTimeCovarianceModel model(corpus::linear(), {TemporalCF(TemporalKind::Gauss, b)});
    const std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
    const std::vector<SpherePoint> x{SpherePoint::from_angles(0.7, 0.3)};
    const FieldSample s = sample_spacetime(model, 1, x, times, 20000, {11, 0});
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double tau = times[k];
      CAPTURE(tau);
      CHECK(std::abs(stats::cross_moment(s.values, 0, k).z(std::exp(-b * tau * tau / 2))) <= 3.0);
    }
  }

  TEST_CASE("space-time sampler against bp_cov") {
    const SpaceTimeCovarianceModel model(finite_spectrum(8),
                                         {TemporalCF(TemporalKind::ExpDecay, 0.6), TemporalCF(TemporalKind::Gauss, 1.0),
                                          TemporalCF(TemporalKind::Rational, 2.0)},
                                         {1.0, 1.2, 0.9});
    const auto pts = few_points();
    const std::vector<double> times{0.0, 0.3, 1.1};
    const FieldSample s = sample_spacetime(model, 8, pts, times, 20000, {12, 0});
    int outside = 0;
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) {
        for (std::size_t t = 0; t < times.size(); ++t) {
          const Eigen::Index i = p;
          const Eigen::Index j = static_cast<Eigen::Index>(t * pts.size()) + q;
          const double ref = bp_cov(model, cos_angle(pts[p], pts[q]), times[t], 1e-12).value;
          outside += std::abs(stats::cross_moment(s.values, i, j).z(ref)) > 3.0;
        }
      }
    }
    CHECK(outside <= 1);
  }

  TEST_CASE("space-time sampler rejects unordered times") {
    const SpaceTimeCovarianceModel model(finite_spectrum(3), {TemporalCF(TemporalKind::Gauss, 1.0)});
    CHECK_THROWS_AS(sample_spacetime(model, 3, few_points(), {0.0, 0.0}, 10, {1, 0}), DomainError);
    CHECK_THROWS_AS(sample_kl_sphere(finite_spectrum(3), 3, few_points(), 0, {1, 0}), DomainError);
  }

  TEST_CASE("literal expansion: product covariance") {
    const auto spec = finite_spectrum(6);
    const SpaceTimeCovarianceModel model(spec, {TemporalCF(TemporalKind::Gauss, 0.5)}, {1.0});
    const auto pts = few_points();

    const LiteralExpansionReport r0 = verify_literal_expansion(model, pts[0], pts[1], 0.0, 0.0, 6, 20000, {13, 0});
    CHECK(std::abs(r0.z_score) <= 3.0);
    CHECK(r0.formula_value == doctest::Approx(schoenberg_cov(spec, cos_angle(pts[0], pts[1]), 1e-12).value));
    CHECK_FALSE(r0.forms_differ);

    const SpaceTimeCovarianceModel one(corpus::linear(), {TemporalCF(TemporalKind::Gauss, 0.7)}, {1.3});
    const LiteralExpansionReport r1 = verify_literal_expansion(one, pts[2], pts[2], 0.5, 1.5, 1, 20000, {13, 1});
    const double phi_s = std::exp(-0.7 * 0.25 / 2);
    const double phi_t = std::exp(-0.7 * 2.25 / 2);
    // v_1 c(1,2) / (4 pi) = a_1 = 1.
    CHECK(r1.formula_value == doctest::Approx(1.69 * phi_s * phi_t).epsilon(1e-13));
    CHECK(std::abs(r1.z_score) <= 3.0);

    const LiteralExpansionReport r2 = verify_literal_expansion(model, pts[0], pts[3], 1.0, 2.0, 6, 20000, {13, 2});
    CHECK(r2.forms_differ);
    CHECK(std::abs(r2.z_score) <= 3.0);
    CHECK(std::abs(r2.formula_value - r2.stationary_value) > 1e-3);
  }
}
