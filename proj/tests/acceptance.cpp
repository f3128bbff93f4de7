// Acceptance suite: one PASS/FAIL line per criterion. The exit status is the
// number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "corpus.hpp"
#include "sphgrf/analysis.hpp"
#include "sphgrf/covariance.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/sampler.hpp"
#include "sphgrf/specfun.hpp"
#include "sphgrf/spectrum.hpp"
#include "stats.hpp"

using namespace sgrf;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

AngularPowerSpectrum finite_spectrum(int L) {
  std::vector<double> head(L + 1);
  for (int n = 0; n <= L; ++n) head[n] = 1.0 / ((n + 1.0) * (n + 1.0));
  return normalize(AngularPowerSpectrum(corpus::half(), 1.0, head));
}

FieldSample circle_sample(const AngularPowerSpectrum& spec, int replicates, std::uint64_t seed, double tol) {
  const auto pts = great_circle_points(256);
  const CovMatrix cov = cov_matrix(spec, pts, tol, JitterPolicy::autojitter(1e-8));
  return sample_cholesky(cov, replicates, {seed, 0}, pts);
}

// Worst |z| of the empirical cross moments against reference covariances.
struct ZTally {
  double worst = 0.0;
  int outside = 0;
  int total = 0;
  void add(const stats::Estimate& e, double ref) {
    const double z = std::abs(e.z(ref));
    worst = std::max(worst, z);
    outside += z > 3.0;
    ++total;
  }
};

Verdict addition_theorem() {
  std::mt19937_64 eng(20240101);
  std::normal_distribution<double> g;
  constexpr int kLmax = 32;
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const SpherePoint x = SpherePoint::normalized({g(eng), g(eng), g(eng)});
    const SpherePoint y = SpherePoint::normalized({g(eng), g(eng), g(eng)});
    const std::vector<double> yx = real_sph_harm_all(kLmax, x);
    const std::vector<double> yy = real_sph_harm_all(kLmax, y);
    const std::vector<double> w = gegenbauer_w_sequence(GegenbauerIndex::finite(0.5), cos_angle(x, y), kLmax);
    for (int l = 0; l <= kLmax; ++l) {
      double sum = 0.0;
      for (int m = -l; m <= l; ++m) sum += yx[l * l + l + m] * yy[l * l + l + m];
      worst = std::max(worst, std::abs(sum - (2 * l + 1) / (4 * std::numbers::pi) * w[l]));
    }
  }
  return {worst <= 1e-10, fmt("max residual %.3e over 100 pairs, l <= 32 (tol 1e-10)", worst)};
}

Verdict orthogonality() {
  double worst = 0.0;
  for (double lambda : {0.5, 1.0, 1.5, 3.0}) {
    const QuadratureRule q = gauss_gegenbauer(lambda, 128);
    std::vector<std::vector<double>> w;
    for (double x : q.nodes) w.push_back(gegenbauer_w_sequence(GegenbauerIndex::finite(lambda), x, 20));
    for (int m = 0; m <= 20; ++m) {
      for (int n = 0; n <= 20; ++n) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * w[i][m] * w[i][n];
        // Scaled so the target is the Kronecker delta.
        const double scaled = s * std::sqrt(omega(m, lambda) * omega(n, lambda));
        worst = std::max(worst, std::abs(scaled - (m == n ? 1.0 : 0.0)));
      }
    }
  }
  return {worst <= 1e-8, fmt("max relative error %.3e, 128 nodes, m,n <= 20 (tol 1e-8)", worst)};
}

Verdict small_angle_constant() {
  const std::vector<double> v{1e-1, 1e-2, 1e-3};
  const RatioSeries r = malyarenko_ratio(corpus::inverse_n(), v);
  std::vector<double> literal(v.size());
  bool certified = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    literal[i] = r.measured[i] / (0.5 * v[i]);
    certified = certified && r.bounds[i] <= 0.01 * r.predicted[i];
  }
  const bool in_band = literal.back() >= 0.95 && literal.back() <= 1.05;
  const bool approaches =
      std::abs(literal[2] - 1.0) < std::abs(literal[1] - 1.0) && std::abs(literal[1] - 1.0) < std::abs(literal[0] - 1.0);
  return {in_band && approaches && certified,
          fmt("I/(v/2) = %.5f, %.5f, %.5f at v = 1e-1, 1e-2, 1e-3 (band [0.95, 1.05]); with K = %.4f the ratios are "
              "%.5f, %.5f, %.5f",
              literal[0], literal[1], literal[2], malyarenko_constant(0.5, 1.0), r.ratios[0], r.ratios[1],
              r.ratios[2])};
}

Verdict hilbert_sphere() {
  const AngularPowerSpectrum s =
      AngularPowerSpectrum::from_tail(GegenbauerIndex::infinite(), TailDescriptor::power(0.5), 1);
  const RatioSeries r = hilbert_ratio(s, {1e-2});
  const double expected = std::sqrt(std::numbers::pi / 2) * 1e-2;
  const bool ok = std::abs(r.predicted[0] - expected) <= 1e-14 * expected;
  const double ratio = r.measured[0] / expected;
  return {ok && ratio >= 0.95 && ratio <= 1.05, fmt("ratio %.5f at v = 1e-2 (band [0.95, 1.05])", ratio)};
}

Verdict jacobi_identity() {
  double residual = 0.0;
  for (double lambda : {0.5, 1.0, 1.5, 3.0}) {
    for (const JacobiPair jp : {JacobiPair(lambda - 0.5, lambda - 0.5), JacobiPair(lambda - 0.5, 0.0)}) {
      for (int k = 0; k <= 24; ++k) {
        const double theta = std::numbers::pi * k / 24.0;
        for (int n = 0; n <= 50; ++n) residual = std::max(residual, jacobi_difference_check(n, jp, theta));
      }
    }
  }
  double worst_gap = 0.0;
  bool agree = true;
  for (const auto& e : corpus::all()) {
    const double tol = std::max(1e-8, e.spec.tail_sum(std::size_t{1} << 20));
    for (double v : {1e-3, 0.1, 1.0, 3.0}) {
      const SeriesValue d = incremental_variance(e.spec, v, tol, IncrementMethod::Direct);
      const SeriesValue s = incremental_variance(e.spec, v, tol, IncrementMethod::Star);
      const double gap = std::abs(d.value - s.value);
      worst_gap = std::max(worst_gap, gap);
      agree = agree && gap <= d.bound + s.bound + 1e-12;
    }
  }
  return {residual <= 1e-10 && agree,
          fmt("max identity residual %.3e (tol 1e-10); max STAR-DIRECT gap %.3e %s", residual, worst_gap,
              agree ? "within combined bounds" : "exceeds combined bounds")};
}

Verdict sampler_covariance() {
  const AngularPowerSpectrum spec = finite_spectrum(20);
  std::vector<SpherePoint> pts{SpherePoint::from_angles(0.2, 0.3)};
  for (int k = 1; k <= 10; ++k) pts.push_back(SpherePoint::from_angles(0.2 + 0.28 * k, 0.3));
  const FieldSample kl = sample_kl_sphere(spec, 20, pts, 20000, {7001, 0});
  ZTally spatial;
  for (int k = 1; k <= 10; ++k) {
    spatial.add(stats::cross_moment(kl.values, 0, k), schoenberg_cov(spec, cos_angle(pts[0], pts[k]), 1e-14).value);
  }

  const SpaceTimeCovarianceModel model(spec,
                                       {TemporalCF(TemporalKind::Gauss, 1.0), TemporalCF(TemporalKind::ExpDecay, 0.6),
                                        TemporalCF(TemporalKind::Rational, 2.0)},
                                       {1.0, 1.2, 0.9});
  const std::vector<SpherePoint> sp{SpherePoint::from_angles(0.3, 0.1), SpherePoint::from_angles(1.2, 2.0),
                                    SpherePoint::from_angles(2.0, -1.0), SpherePoint::from_angles(0.9, 4.0)};
  const std::vector<double> times{0.0, 0.4, 1.1};
  const FieldSample st = sample_spacetime(model, 20, sp, times, 20000, {7002, 0});
  ZTally temporal;
  const int pairs[10][3] = {{0, 0, 1}, {0, 0, 2}, {0, 1, 0}, {0, 1, 1}, {1, 2, 2},
                            {2, 3, 1}, {3, 0, 2}, {1, 1, 1}, {2, 0, 0}, {3, 2, 2}};
  for (const auto& [p, q, t] : pairs) {
    const Eigen::Index j = static_cast<Eigen::Index>(t * sp.size()) + q;
    temporal.add(stats::cross_moment(st.values, p, j), bp_cov(model, cos_angle(sp[p], sp[q]), times[t], 1e-14).value);
  }
  return {spatial.outside == 0 && temporal.outside == 0,
          fmt("spatial max |z| %.2f at 10 lags, space-time max |z| %.2f at 10 pairs (limit 3)", spatial.worst,
              temporal.worst)};
}

Verdict literal_expansion() {
  const SpaceTimeCovarianceModel model(finite_spectrum(6), {TemporalCF(TemporalKind::Gauss, 0.5)}, {1.0});
  const std::vector<SpherePoint> sp{SpherePoint::from_angles(0.3, 0.1), SpherePoint::from_angles(1.2, 2.0),
                                    SpherePoint::from_angles(2.0, -1.0)};
  struct Case {
    int x, y;
    double s, t;
  };
  const Case cases[] = {{0, 1, 0.0, 0.0}, {0, 1, 0.5, 1.0}, {1, 2, 1.0, 2.0}, {0, 0, 0.0, 1.5}, {2, 0, 0.7, 0.2}};
  double worst = 0.0;
  std::uint64_t replicate = 0;
  for (const Case& c : cases) {
    const LiteralExpansionReport r =
        verify_literal_expansion(model, sp[c.x], sp[c.y], c.s, c.t, 6, 20000, {7101, replicate++});
    worst = std::max(worst, std::abs(r.z_score));
  }
  return {worst <= 3.0, fmt("max |z| %.2f at 5 space-time pairs (limit 3)", worst)};
}

Verdict dudley() {
  const Continuity p = dudley_classify(corpus::power(0.5)).analytic;
  const DudleyReport k3 = dudley_classify(corpus::log_only(3.0));
  const DudleyReport k1 = dudley_classify(corpus::log_only(1.0));
  bool named = p == Continuity::Continuous && k3.analytic == Continuity::Continuous &&
               k1.analytic == Continuity::Discontinuous;
  int agree = 0;
  int total = 0;
  for (const auto& e : corpus::all()) {
    agree += dudley_classify(e.spec).agree;
    ++total;
  }
  return {named && agree == total, fmt("POWER(0.5) %s, LOG_ONLY(3) %s, LOG_ONLY(1) %s; numeric agrees on %d/%d",
                                       to_string(p), to_string(k3.analytic), to_string(k1.analytic), agree, total)};
}

Verdict fractional() {
  double worst = 0.0;
  const AngularPowerSpectrum finite = normalize(AngularPowerSpectrum(corpus::half(), 1.0, {0.2, 0.3, 0.1, 0.4}));
  for (const auto& spec : {finite, corpus::power(2.5), corpus::power(3.0, 1.0, 2), corpus::geometric(0.5)}) {
    const AngularPowerSpectrum composed = fractional_transform(fractional_transform(spec, 0.3, false), 0.7, false);
    const AngularPowerSpectrum direct = fractional_transform(spec, 1.0, false);
    for (std::size_t n = 0; n <= 2000; ++n) {
      const double a = direct.coefficient(n);
      if (a > 0.0) worst = std::max(worst, std::abs(composed.coefficient(n) - a) / a);
    }
  }
  const double base = variogram_holder(circle_sample(corpus::inverse_n(), 10000, 7201, 1e-6)).gamma_hat;
  const AngularPowerSpectrum rough = fractional_transform(corpus::inverse_n(), 0.25, true);
  const double shifted = variogram_holder(circle_sample(rough, 10000, 7202, 1e-3)).gamma_hat;
  const double shift = shifted - base;
  return {worst <= 1e-12 && std::abs(shift + 0.5) <= 0.15,
          fmt("semigroup max relative gap %.3e (tol 1e-12); gamma_hat %.3f -> %.3f, shift %.3f (target -0.5 +- 0.15)",
              worst, base, shifted, shift)};
}

Verdict langschwab() {
  const double gamma_hat = variogram_holder(circle_sample(corpus::inverse_n(), 10000, 7301, 1e-6)).gamma_hat;
  const SpherePoint x = SpherePoint::from_angles(1.0, 0.0);
  const SpherePoint y = SpherePoint::from_angles(1.3, 0.2);
  const MomentReport m = moment_bound_check(corpus::inverse_n(), 2, {{x, y}}, 100000, {7302, 0}, 1.0);
  const double ratio = m.pairs[0].ratio;
  return {gamma_hat >= 0.85 && gamma_hat <= 1.15 && ratio >= 0.9 && ratio <= 1.1,
          fmt("gamma_hat %.3f (band [0.85, 1.15]); fourth-moment ratio %.4f (band [0.9, 1.1])", gamma_hat, ratio)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("sgrf_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path fin = dir / "finite.json";
  const fs::path st = dir / "spacetime.json";
  const fs::path inv = dir / "inverse_n.json";
  std::ofstream(fin) << R"({"schema":"aps-v1","lambda":0.5,"head":[0.1,0.4,0.3,0.2]})";
  std::ofstream(st) << R"({"schema":"aps-v1","lambda":0.5,"head":[0.2,0.5,0.3],
    "temporal":[{"kind":"gauss","b":1.0},{"kind":"expdecay","b":0.5}],"c_l":[1.0,1.5]})";
  std::ofstream(inv) << R"({"schema":"aps-v1","lambda":0.5,"tail":{"kind":"power","gamma":1,"start":1}})";

  const std::string commands[] = {
      "simulate --model " + fin.string() + " --points random:50:3 --replicates 200 --seed 11",
      "simulate-spacetime --model " + st.string() + " --points grid:lat-lon:4x6 --times 0:0.5:4 --replicates 50 "
                                                    "--seed 12",
      "holder --model " + inv.string() + " --points greatcircle:64 --replicates 1000 --tol 1e-3 --seed 13",
  };
  int identical = 0;
  std::string failure;
  for (std::size_t c = 0; c < std::size(commands); ++c) {
    std::string outputs[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("out_" + std::to_string(c) + "_" + std::to_string(rep));
      const std::string cmd = std::string("'") + SPHERE_GRF_CLI + "' " + commands[c] + " --out " + out.string();
      const int status = std::system(cmd.c_str());
      ran = ran && WIFEXITED(status) && WEXITSTATUS(status) == 0;
      outputs[rep] = slurp(out) + slurp(out.string() + ".meta.json");
    }
    if (ran && !outputs[0].empty() && outputs[0] == outputs[1]) {
      ++identical;
    } else if (failure.empty()) {
      failure = commands[c].substr(0, commands[c].find(' '));
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {identical == 3, fmt("%d/3 commands byte-identical across reruns%s%s", identical,
                              failure.empty() ? "" : "; first mismatch: ", failure.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"addition theorem", addition_theorem},
      {"Gegenbauer orthogonality", orthogonality},
      {"small-angle constant for A_n = 1/n", small_angle_constant},
      {"Hilbert-sphere increment", hilbert_sphere},
      {"Jacobi difference identity and increment forms", jacobi_identity},
      {"sampler covariance", sampler_covariance},
      {"product-form space-time expansion", literal_expansion},
      {"Dudley classification", dudley},
      {"fractional semigroup and smoothing shift", fractional},
      {"variogram index and moment ratio", langschwab},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("%s [%2zu] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
