#include "sphgrf/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

namespace sgrf {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; they are written as null.
Json real_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json real_array(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(real_json(x));
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string sample_csv(const FieldSample& sample) {
  const std::size_t P = sample.points.empty() ? static_cast<std::size_t>(sample.values.cols()) : sample.points.size();
  const bool timed = !sample.times.empty();
  std::string out = timed ? "replicate,point_id,time,value\n" : "replicate,point_id,value\n";
  out.reserve(out.size() + static_cast<std::size_t>(sample.values.size()) * 32);
  for (Eigen::Index r = 0; r < sample.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < sample.values.cols(); ++c) {
      const std::size_t point = static_cast<std::size_t>(c) % P;
      out += std::to_string(r);
      out += ',';
      out += std::to_string(point);
      out += ',';
      if (timed) {
        out += format_real(sample.times[static_cast<std::size_t>(c) / P]);
        out += ',';
      }
      out += format_real(sample.values(r, c));
      out += '\n';
    }
  }
  return out;
}

std::string sample_sidecar_json(const FieldSample& sample, const std::string& model_hash) {
  Json j = Json::object();
  j["seed"] = sample.seed;
  j["stream"] = sample.stream;
  j["method"] = to_string(sample.method);
  if (sample.truncation_L >= 0) {
    j["L"] = sample.truncation_L;
  } else {
    j["L"] = nullptr;
  }
  j["jitter"] = sample.jitter_added;
  j["model_hash"] = model_hash;
  j["replicates"] = sample.replicates();
  j["points"] = sample.points.size();
  j["times"] = sample.time_count();
  return dump(j);
}

std::string ratio_series_csv(const RatioSeries& s) {
  std::string out = "v,measured,predicted,ratio,bound,degree\n";
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    out += format_real(s.v[i]) + ',' + format_real(s.measured[i]) + ',' + format_real(s.predicted[i]) + ',' +
           format_real(s.ratios[i]) + ',' + format_real(s.bounds[i]) + ',' + std::to_string(s.degrees[i]) + '\n';
  }
  return out;
}

std::string ratio_series_json(const RatioSeries& s, const std::string& kind, double constant) {
  Json j = Json::object();
  j["kind"] = kind;
  j["constant"] = real_json(constant);
  j["v"] = real_array(s.v);
  j["measured"] = real_array(s.measured);
  j["predicted"] = real_array(s.predicted);
  j["ratios"] = real_array(s.ratios);
  j["bounds"] = real_array(s.bounds);
  j["degrees"] = s.degrees;
  return dump(j);
}

std::string regularity_report_json(const RegularityReport& r) {
  Json j = Json::object();
  j["gamma_hat"] = r.gamma_hat ? real_json(*r.gamma_hat) : Json(nullptr);
  j["dudley"] = to_string(r.dudley);
  j["dudley_numeric"] = r.dudley_numeric ? real_json(*r.dudley_numeric) : Json(nullptr);
  j["dudley_numeric_decision"] = to_string(r.dudley_numeric_decision);
  j["langschwab_gamma_sup"] = real_json(r.langschwab_gamma_sup);
  j["holder_bound"] = r.holder_bound ? real_json(*r.holder_bound) : Json(nullptr);
  return dump(j);
}

std::string dudley_report_json(const DudleyReport& r) {
  Json j = Json::object();
  j["analytic"] = to_string(r.analytic);
  j["numeric"] = to_string(r.numeric);
  j["numeric_value"] = real_json(r.numeric_value);
  j["last_ratios"] = real_array(r.last_ratios);
  j["agree"] = r.agree;
  return dump(j);
}

std::string integrability_report_json(const IntegrabilityReport& r, double gamma) {
  Json j = Json::object();
  j["gamma"] = gamma;
  j["decision"] = to_string(r.decision);
  j["summability"] = to_string(r.summability);
  j["value"] = real_json(r.value);
  j["ratio_at_smallest"] = real_json(r.ratio_at_smallest);
  j["ratio_at_largest"] = real_json(r.ratio_at_largest);
  j["last_ratios"] = real_array(r.last_ratios);
  j["agree"] = r.agree;
  return dump(j);
}

std::string moment_report_json(const MomentReport& r, int n, double gamma) {
  Json j = Json::object();
  j["n"] = n;
  j["gamma"] = gamma;
  Json pairs = Json::array();
  for (const MomentPair& p : r.pairs) {
    pairs.push_back(Json{{"angle", real_json(p.angle)},
                         {"moment", real_json(p.moment)},
                         {"standard_error", real_json(p.standard_error)},
                         {"gaussian_moment", real_json(p.gaussian_moment)},
                         {"ratio", real_json(p.ratio)},
                         {"z_score", real_json(p.z_score)},
                         {"bound_ratio", real_json(p.bound_ratio)}});
  }
  j["pairs"] = pairs;
  j["max_bound_ratio"] = real_json(r.max_bound_ratio);
  return dump(j);
}

std::string variogram_csv(const VariogramReport& r) {
  std::string out = "lag,vhat,in_window\n";
  for (std::size_t k = 0; k < r.lags.size(); ++k) {
    const bool used = std::find(r.window.begin(), r.window.end(), k) != r.window.end();
    out += format_real(r.lags[k]) + ',' + format_real(r.vhat[k]) + ',' + (used ? "1" : "0") + '\n';
  }
  return out;
}

std::string variogram_json(const VariogramReport& r) {
  Json j = Json::object();
  j["gamma_hat"] = r.degenerate ? Json(nullptr) : real_json(r.gamma_hat);
  j["holder_bound"] = r.degenerate ? Json(nullptr) : real_json(r.holder_bound);
  j["degenerate"] = r.degenerate;
  j["gamma_in_range"] = r.gamma_in_range;
  j["window_lags"] = r.window.size();
  return dump(j);
}

std::string covariance_csv(const Eigen::MatrixXd& m) {
  std::string out = "i,j,value\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      out += std::to_string(i) + ',' + std::to_string(k) + ',' + format_real(m(i, k)) + '\n';
    }
  }
  return out;
}

}  // namespace sgrf
