#include "sphgrf/runs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "sphgrf/analysis.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/reports.hpp"
#include "sphgrf/sampler.hpp"

namespace sgrf {

namespace {

using Json = nlohmann::ordered_json;

Json real_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void check_replicates(int replicates) {
  if (replicates < 1) throw ConfigError("replicate count must be >= 1");
}

Json tail_summary(const AngularPowerSpectrum& spec) {
  const TailDescriptor t = spec.tail();
  Json j = Json::object();
  j["kind"] = to_string(t.kind);
  j["gamma"] = t.gamma;
  j["k"] = t.k;
  j["r"] = t.r;
  j["amplitude"] = t.amplitude;
  return j;
}

// Incremental variance grid for the two evaluation forms.
const double kIdentityAngles[] = {1.0, 0.5, 0.1, 0.01};
const double kIdentityThetas[] = {1e-3, 0.1, 0.7, 1.5, 2.4, 3.1};
const JacobiPair kIdentityPairs[] = {{-0.5, -0.5}, {0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}, {2.5, 2.5}, {1.0, 0.0},
                                     {3.0, 0.5}};
constexpr int kIdentityMaxDegree = 50;

}  // namespace

int resolve_truncation_degree(const AngularPowerSpectrum& spec, int L) {
  if (L >= 0) return L;
  if (spec.has_tail()) throw ConfigError("a truncation degree L is required for spectra with an infinite tail");
  return spec.head_degree();
}

RunOutput run_simulate(const ModelDocument& model, int L, const std::vector<SpherePoint>& points, int replicates,
                       std::uint64_t seed) {
  check_replicates(replicates);
  const int degree = resolve_truncation_degree(model.spectrum, L);
  const FieldSample sample = sample_kl_sphere(model.spectrum, degree, points, replicates, RngSpec{seed, 0});
  return {sample_csv(sample), "csv", sample_sidecar_json(sample, model_hash_hex(model))};
}

RunOutput run_simulate_spacetime(const ModelDocument& model, int L, const std::vector<SpherePoint>& points,
                                 const std::vector<double>& times, int replicates, std::uint64_t seed) {
  check_replicates(replicates);
  const int degree = resolve_truncation_degree(model.spectrum, L);
  const FieldSample sample = sample_spacetime(model.spacetime(), degree, points, times, replicates, RngSpec{seed, 0});
  return {sample_csv(sample), "csv", sample_sidecar_json(sample, model_hash_hex(model))};
}

RunOutput run_covariance(const ModelDocument& model, const std::vector<SpherePoint>& points,
                         const std::vector<double>& times, double tol) {
  CovMatrix cov;
  if (times.empty()) {
    cov = cov_matrix(model.spectrum, points, tol, JitterPolicy::matrix_only());
  } else {
    std::vector<SpaceTimePoint> st;
    st.reserve(points.size() * times.size());
    for (double t : times) {
      for (const SpherePoint& p : points) st.push_back({p, t});
    }
    cov = cov_matrix(model.spacetime(), st, tol, JitterPolicy::matrix_only());
  }
  Json side = Json::object();
  side["points"] = points.size();
  side["times"] = std::max<std::size_t>(1, times.size());
  side["size"] = cov.matrix.rows();
  side["tol"] = tol;
  side["model_hash"] = model_hash_hex(model);
  return {covariance_csv(cov.matrix), "csv", side.dump(2) + "\n"};
}

RunOutput run_malyarenko(const ModelDocument& model, const std::vector<double>& v) {
  const AngularPowerSpectrum& spec = model.spectrum;
  const RatioSeries series = malyarenko_ratio(spec, v);
  const double constant = malyarenko_constant(spec.lambda().value(), spec.tail().gamma);
  return {ratio_series_csv(series), "csv", ratio_series_json(series, "malyarenko", constant)};
}

RunOutput run_hilbert(const ModelDocument& model, const std::vector<double>& v) {
  const RatioSeries series = hilbert_ratio(model.spectrum, v);
  const double e = model.spectrum.tail().gamma;
  const double constant = std::exp(std::lgamma(1.0 - e) - e * std::numbers::ln2);
  return {ratio_series_csv(series), "csv", ratio_series_json(series, "hilbert", constant)};
}

RunOutput run_identity(const ModelDocument* model, double tol) {
  std::string csv = "n,alpha,beta,theta,residual\n";
  double max_residual = 0.0;
  for (const JacobiPair& jp : kIdentityPairs) {
    for (double theta : kIdentityThetas) {
      for (int n = 0; n <= kIdentityMaxDegree; ++n) {
        const double r = jacobi_difference_check(n, jp, theta);
        max_residual = std::max(max_residual, r);
        csv += std::to_string(n) + ',' + format_real(jp.alpha) + ',' + format_real(jp.beta) + ',' +
               format_real(theta) + ',' + format_real(r) + '\n';
      }
    }
  }
  Json side = Json::object();
  side["max_residual"] = max_residual;
  side["max_degree"] = kIdentityMaxDegree;
  if (model != nullptr) {
    Json rows = Json::array();
    bool agree = true;
    for (double v : kIdentityAngles) {
      const SeriesValue direct = incremental_variance(model->spectrum, v, tol, IncrementMethod::Direct);
      const SeriesValue star = incremental_variance(model->spectrum, v, tol, IncrementMethod::Star);
      const double diff = std::abs(direct.value - star.value);
      const double combined = direct.bound + star.bound;
      agree = agree && diff <= combined;
      rows.push_back(Json{{"v", v},
                          {"direct", direct.value},
                          {"star", star.value},
                          {"difference", diff},
                          {"combined_bound", combined},
                          {"degree", direct.degree}});
    }
    side["tol"] = tol;
    side["increments"] = rows;
    side["forms_agree"] = agree;
    side["model_hash"] = model_hash_hex(*model);
  }
  return {csv, "csv", side.dump(2) + "\n"};
}

RunOutput run_classify(const ModelDocument& model, double gamma) {
  const RegularityReport report = regularity_report(model.spectrum);
  if (!(gamma > 0.0)) return {regularity_report_json(report), "json", {}};
  Json j = Json::parse(regularity_report_json(report));
  const IntegrabilityReport integ = integrability_check(model.spectrum, gamma);
  j["gamma"] = gamma;
  j["summability"] = to_string(integ.summability);
  j["integrability"] = to_string(integ.decision);
  return {j.dump(2) + "\n", "json", {}};
}

RunOutput run_fraclap(const ModelDocument& model, double sigma) {
  if (!std::isfinite(sigma)) throw ConfigError("sigma must be finite");
  ModelDocument out{fractional_transform(model.spectrum, sigma, true), model.temporal, model.c_l};
  Json side = Json::object();
  side["sigma"] = sigma;
  side["source_hash"] = model_hash_hex(model);
  side["result_hash"] = model_hash_hex(out);
  side["tail_before"] = tail_summary(model.spectrum);
  side["tail_after"] = tail_summary(out.spectrum);
  side["langschwab_gamma_sup"] = real_json(langschwab_gamma_sup(out.spectrum));
  return {serialize_model(out), "json", side.dump(2) + "\n"};
}

RunOutput run_holder(const ModelDocument& model, const std::vector<SpherePoint>& points, int replicates,
                     std::uint64_t seed, double tol) {
  check_replicates(replicates);
  const double cap = 1e-8 * model.spectrum.scale();
  const CovMatrix cov = cov_matrix(model.spectrum, points, tol, JitterPolicy::autojitter(cap));
  const FieldSample sample = sample_cholesky(cov, replicates, RngSpec{seed, 0}, points);
  const VariogramReport variogram = variogram_holder(sample);
  const RegularityReport regularity = regularity_report(model.spectrum, &variogram);
  Json side = Json::object();
  side["seed"] = seed;
  side["method"] = to_string(sample.method);
  side["replicates"] = replicates;
  side["points"] = points.size();
  side["tol"] = tol;
  side["jitter"] = sample.jitter_added;
  side["model_hash"] = model_hash_hex(model);
  side["variogram"] = Json::parse(variogram_json(variogram));
  side["regularity"] = Json::parse(regularity_report_json(regularity));
  return {variogram_csv(variogram), "csv", side.dump(2) + "\n"};
}

}  // namespace sgrf
