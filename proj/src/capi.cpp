#include "sphgrf/sphgrf.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "sphgrf/covariance.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/model_io.hpp"
#include "sphgrf/points.hpp"
#include "sphgrf/reports.hpp"
#include "sphgrf/runs.hpp"
#include "sphgrf/sampler.hpp"

struct sgrf_model {
  sgrf::ModelDocument doc;
};

struct sgrf_points {
  std::vector<sgrf::SpherePoint> points;
};

struct sgrf_sample {
  sgrf::FieldSample sample;
};

struct sgrf_report {
  sgrf::RunOutput output;
};

namespace {

thread_local std::string g_last_error;

struct InvalidArgument {
  const char* what;
};

sgrf_status fail(sgrf_status status, const char* message) {
  g_last_error = message;
  return status;
}

sgrf_status status_of(sgrf::ErrorCode code) {
  return static_cast<sgrf_status>(static_cast<int>(code));
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
sgrf_status guarded(F&& body) {
  try {
    body();
    return SGRF_OK;
  } catch (const InvalidArgument& e) {
    return fail(SGRF_ERR_INVALID_ARGUMENT, e.what);
  } catch (const sgrf::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SGRF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SGRF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SGRF_ERR_INTERNAL, "unknown error");
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument{what};
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

double* copy_array(const std::vector<double>& v) {
  double* out = static_cast<double*>(std::malloc(std::max<std::size_t>(1, v.size()) * sizeof(double)));
  if (out == nullptr) throw std::bad_alloc();
  std::copy(v.begin(), v.end(), out);
  return out;
}

sgrf::GegenbauerIndex index_of(double lambda) {
  return std::isinf(lambda) && lambda > 0 ? sgrf::GegenbauerIndex::infinite() : sgrf::GegenbauerIndex::finite(lambda);
}

std::vector<double> time_vector(const double* times, std::size_t count) {
  if (count > 0) require(times, "times is null");
  return count > 0 ? std::vector<double>(times, times + count) : std::vector<double>{};
}

template <typename Handle, typename F>
sgrf_status make_handle(Handle** out, F&& build) {
  return guarded([&] {
    require(out, "out is null");
    *out = nullptr;
    *out = new Handle{build()};
  });
}

}  // namespace

extern "C" {

const char* sgrf_version(void) { return "1.0.0"; }

const char* sgrf_status_name(sgrf_status status) {
  switch (status) {
    case SGRF_OK: return "OK";
    case SGRF_ERR_DOMAIN: return "DOMAIN";
    case SGRF_ERR_CONFIG: return "CONFIG";
    case SGRF_ERR_TRUNCATION: return "TRUNCATION";
    case SGRF_ERR_NOT_POSITIVE_DEFINITE: return "NOT_POSITIVE_DEFINITE";
    case SGRF_ERR_DIVERGENT: return "DIVERGENT";
    case SGRF_ERR_IO: return "IO";
    case SGRF_ERR_UNSUPPORTED: return "UNSUPPORTED";
    case SGRF_ERR_OVERFLOW: return "OVERFLOW";
    case SGRF_ERR_NUMERICAL: return "NUMERICAL";
    case SGRF_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case SGRF_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* sgrf_last_error(void) { return g_last_error.c_str(); }

void sgrf_string_free(char* s) { std::free(s); }
void sgrf_array_free(double* a) { std::free(a); }

sgrf_status sgrf_gegenbauer_w(double lambda, int n, double x, double* out) {
  return guarded([&] {
    require(out, "out is null");
    if (n < 0) throw sgrf::DomainError("degree must be >= 0");
    *out = sgrf::gegenbauer_w_sequence(index_of(lambda), x, n).back();
  });
}

sgrf_status sgrf_jacobi_r(int n, double alpha, double beta, double x, double* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = sgrf::jacobi_r(n, sgrf::JacobiPair(alpha, beta), x);
  });
}

sgrf_status sgrf_omega(int n, double lambda, double* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = sgrf::omega(n, lambda);
  });
}

sgrf_status sgrf_c_dim(int ell, int d, uint64_t* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = sgrf::c_dim(ell, d);
  });
}

sgrf_status sgrf_model_parse(const char* json_text, sgrf_model** out) {
  return make_handle(out, [&] {
    require(json_text, "json_text is null");
    return sgrf::parse_model(json_text);
  });
}

sgrf_status sgrf_model_load(const char* path, sgrf_model** out) {
  return make_handle(out, [&] {
    require(path, "path is null");
    return sgrf::load_model(path);
  });
}

void sgrf_model_free(sgrf_model* model) { delete model; }

sgrf_status sgrf_model_serialize(const sgrf_model* model, char** out) {
  return guarded([&] {
    require(model, "model is null");
    require(out, "out is null");
    *out = copy_string(sgrf::serialize_model(model->doc));
  });
}

sgrf_status sgrf_model_hash(const sgrf_model* model, uint64_t* out) {
  return guarded([&] {
    require(model, "model is null");
    require(out, "out is null");
    *out = sgrf::model_hash(model->doc);
  });
}

sgrf_status sgrf_model_lambda(const sgrf_model* model, double* out) {
  return guarded([&] {
    require(model, "model is null");
    require(out, "out is null");
    const sgrf::GegenbauerIndex l = model->doc.spectrum.lambda();
    *out = l.is_infinite() ? INFINITY : l.value();
  });
}

sgrf_status sgrf_model_coefficients(const sgrf_model* model, size_t begin, size_t count, double* out) {
  return guarded([&] {
    require(model, "model is null");
    if (count > 0) require(out, "out is null");
    model->doc.spectrum.coefficients(begin, std::span<double>(out, count));
  });
}

sgrf_status sgrf_model_tail_sum(const sgrf_model* model, size_t n, double* out) {
  return guarded([&] {
    require(model, "model is null");
    require(out, "out is null");
    *out = model->doc.spectrum.tail_sum(n);
  });
}

sgrf_status sgrf_model_fractional(const sgrf_model* model, double sigma, int renormalize, sgrf_model** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    return sgrf::ModelDocument{sgrf::fractional_transform(model->doc.spectrum, sigma, renormalize != 0),
                               model->doc.temporal, model->doc.c_l};
  });
}

sgrf_status sgrf_model_summability(const sgrf_model* model, double gamma, sgrf_summability* out) {
  return guarded([&] {
    require(model, "model is null");
    require(out, "out is null");
    switch (sgrf::summability_check(model->doc.spectrum, gamma)) {
      case sgrf::Summability::Converges: *out = SGRF_SUM_CONVERGES; break;
      case sgrf::Summability::Diverges: *out = SGRF_SUM_DIVERGES; break;
      case sgrf::Summability::Undecided: *out = SGRF_SUM_UNDECIDED; break;
    }
  });
}

sgrf_status sgrf_schoenberg_cov(const sgrf_model* model, double cosangle, double tol, double* value, double* bound) {
  return guarded([&] {
    require(model, "model is null");
    require(value, "value is null");
    const sgrf::SeriesValue s = sgrf::schoenberg_cov(model->doc.spectrum, cosangle, tol);
    *value = s.value;
    if (bound != nullptr) *bound = s.bound;
  });
}

sgrf_status sgrf_incremental_variance(const sgrf_model* model, double angle, double tol,
                                      sgrf_increment_method method, double* value, double* bound) {
  return guarded([&] {
    require(model, "model is null");
    require(value, "value is null");
    if (method != SGRF_INCREMENT_DIRECT && method != SGRF_INCREMENT_STAR) throw InvalidArgument{"unknown method"};
    const sgrf::SeriesValue s =
        sgrf::incremental_variance(model->doc.spectrum, angle, tol,
                                   method == SGRF_INCREMENT_STAR ? sgrf::IncrementMethod::Star
                                                                 : sgrf::IncrementMethod::Direct);
    *value = s.value;
    if (bound != nullptr) *bound = s.bound;
  });
}

sgrf_status sgrf_bp_cov(const sgrf_model* model, double cosangle, double dt, double tol, double* value,
                        double* bound) {
  return guarded([&] {
    require(model, "model is null");
    require(value, "value is null");
    const sgrf::SeriesValue s = sgrf::bp_cov(model->doc.spacetime(), cosangle, dt, tol);
    *value = s.value;
    if (bound != nullptr) *bound = s.bound;
  });
}

sgrf_status sgrf_points_parse(const char* spec, sgrf_points** out) {
  return make_handle(out, [&] {
    require(spec, "spec is null");
    return sgrf::parse_points(spec);
  });
}

void sgrf_points_free(sgrf_points* points) { delete points; }

size_t sgrf_points_count(const sgrf_points* points) { return points == nullptr ? 0 : points->points.size(); }

int sgrf_points_dimension(const sgrf_points* points) {
  return points == nullptr || points->points.empty() ? 0 : points->points.front().dimension();
}

sgrf_status sgrf_points_coords(const sgrf_points* points, size_t i, double* out, size_t len) {
  return guarded([&] {
    require(points, "points is null");
    require(out, "out is null");
    if (i >= points->points.size()) throw InvalidArgument{"point index out of range"};
    const auto c = points->points[i].coords();
    if (len < c.size()) throw InvalidArgument{"output buffer too small"};
    std::copy(c.begin(), c.end(), out);
  });
}

sgrf_status sgrf_times_parse(const char* spec, double** out, size_t* count) {
  return guarded([&] {
    require(spec, "spec is null");
    require(out, "out is null");
    require(count, "count is null");
    const std::vector<double> t = sgrf::parse_times(spec);
    *out = copy_array(t);
    *count = t.size();
  });
}

sgrf_status sgrf_list_parse(const char* text, double** out, size_t* count) {
  return guarded([&] {
    require(text, "text is null");
    require(out, "out is null");
    require(count, "count is null");
    const std::vector<double> v = sgrf::parse_real_list(text);
    *out = copy_array(v);
    *count = v.size();
  });
}

sgrf_status sgrf_sample_kl(const sgrf_model* model, int L, const sgrf_points* points, int replicates, uint64_t seed,
                           sgrf_sample** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(points, "points is null");
    return sgrf::sample_kl_sphere(model->doc.spectrum, sgrf::resolve_truncation_degree(model->doc.spectrum, L), points->points, replicates, sgrf::RngSpec{seed, 0});
  });
}

sgrf_status sgrf_sample_spacetime(const sgrf_model* model, int L, const sgrf_points* points, const double* times,
                                  size_t time_count, int replicates, uint64_t seed, sgrf_sample** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(points, "points is null");
    return sgrf::sample_spacetime(model->doc.spacetime(), sgrf::resolve_truncation_degree(model->doc.spectrum, L), points->points, time_vector(times, time_count),
                                  replicates, sgrf::RngSpec{seed, 0});
  });
}

sgrf_status sgrf_sample_cholesky(const sgrf_model* model, const sgrf_points* points, double tol, int replicates,
                                 uint64_t seed, double max_jitter, sgrf_sample** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(points, "points is null");
    const sgrf::JitterPolicy policy =
        max_jitter > 0.0 ? sgrf::JitterPolicy::autojitter(max_jitter) : sgrf::JitterPolicy::none();
    const sgrf::CovMatrix cov = sgrf::cov_matrix(model->doc.spectrum, points->points, tol, policy);
    return sgrf::sample_cholesky(cov, replicates, sgrf::RngSpec{seed, 0}, points->points);
  });
}

void sgrf_sample_free(sgrf_sample* sample) { delete sample; }

sgrf_status sgrf_sample_shape(const sgrf_sample* sample, size_t* replicates, size_t* columns) {
  return guarded([&] {
    require(sample, "sample is null");
    if (replicates != nullptr) *replicates = static_cast<size_t>(sample->sample.values.rows());
    if (columns != nullptr) *columns = static_cast<size_t>(sample->sample.values.cols());
  });
}

sgrf_status sgrf_sample_values(const sgrf_sample* sample, double* out, size_t len) {
  return guarded([&] {
    require(sample, "sample is null");
    require(out, "out is null");
    const Eigen::MatrixXd& v = sample->sample.values;
    if (len < static_cast<size_t>(v.size())) throw InvalidArgument{"output buffer too small"};
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, v.rows(), v.cols()) = v;
  });
}

sgrf_status sgrf_sample_csv(const sgrf_sample* sample, char** out) {
  return guarded([&] {
    require(sample, "sample is null");
    require(out, "out is null");
    *out = copy_string(sgrf::sample_csv(sample->sample));
  });
}

sgrf_status sgrf_sample_sidecar(const sgrf_sample* sample, const sgrf_model* model, char** out) {
  return guarded([&] {
    require(sample, "sample is null");
    require(model, "model is null");
    require(out, "out is null");
    *out = copy_string(sgrf::sample_sidecar_json(sample->sample, sgrf::model_hash_hex(model->doc)));
  });
}

sgrf_status sgrf_run_covariance(const sgrf_model* model, const sgrf_points* points, const double* times,
                                size_t time_count, double tol, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(points, "points is null");
    return sgrf::run_covariance(model->doc, points->points, time_vector(times, time_count), tol);
  });
}

sgrf_status sgrf_run_malyarenko(const sgrf_model* model, const double* v, size_t count, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(v, "v is null");
    return sgrf::run_malyarenko(model->doc, std::vector<double>(v, v + count));
  });
}

sgrf_status sgrf_run_hilbert(const sgrf_model* model, const double* v, size_t count, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(v, "v is null");
    return sgrf::run_hilbert(model->doc, std::vector<double>(v, v + count));
  });
}

sgrf_status sgrf_run_identity(const sgrf_model* model, double tol, sgrf_report** out) {
  return make_handle(out, [&] { return sgrf::run_identity(model == nullptr ? nullptr : &model->doc, tol); });
}

sgrf_status sgrf_run_classify(const sgrf_model* model, double gamma, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    return sgrf::run_classify(model->doc, gamma);
  });
}

sgrf_status sgrf_run_fraclap(const sgrf_model* model, double sigma, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    return sgrf::run_fraclap(model->doc, sigma);
  });
}

sgrf_status sgrf_run_holder(const sgrf_model* model, const sgrf_points* points, int replicates, uint64_t seed,
                            double tol, sgrf_report** out) {
  return make_handle(out, [&] {
    require(model, "model is null");
    require(points, "points is null");
    return sgrf::run_holder(model->doc, points->points, replicates, seed, tol);
  });
}

void sgrf_report_free(sgrf_report* report) { delete report; }

const char* sgrf_report_primary(const sgrf_report* report) {
  return report == nullptr ? nullptr : report->output.primary.c_str();
}

const char* sgrf_report_format(const sgrf_report* report) {
  return report == nullptr ? nullptr : report->output.format.c_str();
}

const char* sgrf_report_sidecar(const sgrf_report* report) {
  if (report == nullptr || report->output.sidecar.empty()) return nullptr;
  return report->output.sidecar.c_str();
}

}  // extern "C"
