// Command-line front end. Every command loads its inputs through the C API,
// calls one library routine and writes the returned text.
//
// Exit status: 0 on success, 2 for configuration errors (bad flags, schema
// violations, unreadable inputs), 1 for numerical or runtime failures.

#include <sphgrf/sphgrf.h>

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Failure {
  int exit_code;
  std::string message;
};

bool is_config_status(sgrf_status s) {
  return s == SGRF_ERR_CONFIG || s == SGRF_ERR_IO || s == SGRF_ERR_INVALID_ARGUMENT;
}

void check(sgrf_status s, bool config_stage = false) {
  if (s == SGRF_OK) return;
  const int code = config_stage || is_config_status(s) ? kExitConfig : kExitRuntime;
  throw Failure{code, std::string(sgrf_status_name(s)) + ": " + sgrf_last_error()};
}

struct ModelDeleter {
  void operator()(sgrf_model* m) const { sgrf_model_free(m); }
};
struct PointsDeleter {
  void operator()(sgrf_points* p) const { sgrf_points_free(p); }
};
struct ReportDeleter {
  void operator()(sgrf_report* r) const { sgrf_report_free(r); }
};
struct ArrayDeleter {
  void operator()(double* a) const { sgrf_array_free(a); }
};
using ModelPtr = std::unique_ptr<sgrf_model, ModelDeleter>;
using PointsPtr = std::unique_ptr<sgrf_points, PointsDeleter>;
using ReportPtr = std::unique_ptr<sgrf_report, ReportDeleter>;

struct Options {
  std::string model;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  int replicates = 0;
  std::string points;
  std::string times;
  int L = -1;
  double gamma = 0.0;
  std::optional<double> sigma;
  std::string v;
};

ModelPtr load_model(const std::string& path) {
  if (path.empty()) throw Failure{kExitConfig, "--model is required"};
  sgrf_model* m = nullptr;
  check(sgrf_model_load(path.c_str(), &m), true);
  return ModelPtr(m);
}

PointsPtr load_points(const std::string& spec) {
  if (spec.empty()) throw Failure{kExitConfig, "--points is required"};
  sgrf_points* p = nullptr;
  check(sgrf_points_parse(spec.c_str(), &p), true);
  return PointsPtr(p);
}

std::vector<double> take_array(sgrf_status s, double* data, std::size_t count) {
  std::unique_ptr<double, ArrayDeleter> owner(data);
  check(s, true);
  return std::vector<double>(data, data + count);
}

std::vector<double> parse_times(const std::string& spec) {
  double* data = nullptr;
  std::size_t count = 0;
  const sgrf_status s = sgrf_times_parse(spec.c_str(), &data, &count);
  return take_array(s, data, count);
}

std::vector<double> parse_list(const std::string& text) {
  double* data = nullptr;
  std::size_t count = 0;
  const sgrf_status s = sgrf_list_parse(text.c_str(), &data, &count);
  return take_array(s, data, count);
}

std::uint64_t require_seed(const Options& o) {
  if (!o.seed) throw Failure{kExitConfig, "--seed is required for stochastic commands"};
  if (o.out.empty()) throw Failure{kExitConfig, "--out is required for stochastic commands"};
  return *o.seed;
}

double tolerance(const Options& o, double fallback) {
  const double tol = o.tol.value_or(fallback);
  if (!(tol > 0.0)) throw Failure{kExitConfig, "--tol must be positive"};
  return tol;
}

int replicate_count(const Options& o, int fallback) {
  const int r = o.replicates > 0 ? o.replicates : fallback;
  if (r < 1) throw Failure{kExitConfig, "--replicates must be >= 1"};
  return r;
}

// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitConfig, "cannot write '" + tmp.string() + "'"};
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Failure{kExitConfig, "cannot write '" + tmp.string() + "'"};
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Failure{kExitConfig, "cannot rename onto '" + path + "'"};
  }
}

std::string sidecar_path(const std::string& out) { return out + ".meta.json"; }

// Primary text to --out (or stdout), sidecar next to it.
void emit(const Options& o, sgrf_status status, sgrf_report* raw) {
  ReportPtr report(raw);
  check(status);
  const std::string primary = sgrf_report_primary(report.get());
  const char* sidecar = sgrf_report_sidecar(report.get());
  if (o.out.empty()) {
    std::fwrite(primary.data(), 1, primary.size(), stdout);
    return;
  }
  write_atomic(o.out, primary);
  if (sidecar != nullptr) write_atomic(sidecar_path(o.out), sidecar);
}

void emit_sample(const Options& o, sgrf_status status, sgrf_sample* raw, const sgrf_model* model) {
  std::unique_ptr<sgrf_sample, void (*)(sgrf_sample*)> sample(raw, sgrf_sample_free);
  check(status);
  char* csv = nullptr;
  check(sgrf_sample_csv(sample.get(), &csv));
  std::unique_ptr<char, void (*)(char*)> csv_owner(csv, sgrf_string_free);
  char* side = nullptr;
  check(sgrf_sample_sidecar(sample.get(), model, &side));
  std::unique_ptr<char, void (*)(char*)> side_owner(side, sgrf_string_free);
  write_atomic(o.out, csv);
  write_atomic(sidecar_path(o.out), side);
}

int run_command(const std::string& command, const Options& o) {
  if (command == "simulate") {
    const std::uint64_t seed = require_seed(o);
    const ModelPtr model = load_model(o.model);
    const PointsPtr points = load_points(o.points);
    sgrf_sample* s = nullptr;
    const sgrf_status st = sgrf_sample_kl(model.get(), o.L, points.get(), replicate_count(o, 100), seed, &s);
    emit_sample(o, st, s, model.get());
  } else if (command == "simulate-spacetime") {
    const std::uint64_t seed = require_seed(o);
    const ModelPtr model = load_model(o.model);
    const PointsPtr points = load_points(o.points);
    if (o.times.empty()) throw Failure{kExitConfig, "--times is required"};
    const std::vector<double> times = parse_times(o.times);
    sgrf_sample* s = nullptr;
    const sgrf_status st = sgrf_sample_spacetime(model.get(), o.L, points.get(), times.data(), times.size(),
                                                 replicate_count(o, 100), seed, &s);
    emit_sample(o, st, s, model.get());
  } else if (command == "covariance") {
    const ModelPtr model = load_model(o.model);
    const PointsPtr points = load_points(o.points);
    const std::vector<double> times = o.times.empty() ? std::vector<double>{} : parse_times(o.times);
    sgrf_report* r = nullptr;
    const sgrf_status st =
        sgrf_run_covariance(model.get(), points.get(), times.data(), times.size(), tolerance(o, 1e-6), &r);
    emit(o, st, r);
  } else if (command == "verify-malyarenko" || command == "verify-hilbert") {
    const ModelPtr model = load_model(o.model);
    const std::vector<double> v = parse_list(o.v.empty() ? "1e-1,1e-2,1e-3" : o.v);
    sgrf_report* r = nullptr;
    const sgrf_status st = command == "verify-malyarenko" ? sgrf_run_malyarenko(model.get(), v.data(), v.size(), &r)
                                                          : sgrf_run_hilbert(model.get(), v.data(), v.size(), &r);
    emit(o, st, r);
  } else if (command == "verify-identity") {
    const ModelPtr model = o.model.empty() ? ModelPtr() : load_model(o.model);
    sgrf_report* r = nullptr;
    const sgrf_status st = sgrf_run_identity(model.get(), tolerance(o, 1e-6), &r);
    emit(o, st, r);
  } else if (command == "classify") {
    const ModelPtr model = load_model(o.model);
    sgrf_report* r = nullptr;
    const sgrf_status st = sgrf_run_classify(model.get(), o.gamma, &r);
    emit(o, st, r);
  } else if (command == "fraclap") {
    if (!o.sigma) throw Failure{kExitConfig, "--sigma is required"};
    const ModelPtr model = load_model(o.model);
    sgrf_report* r = nullptr;
    const sgrf_status st = sgrf_run_fraclap(model.get(), *o.sigma, &r);
    emit(o, st, r);
  } else if (command == "holder") {
    const std::uint64_t seed = require_seed(o);
    const ModelPtr model = load_model(o.model);
    const PointsPtr points = load_points(o.points.empty() ? "greatcircle:256" : o.points);
    sgrf_report* r = nullptr;
    const sgrf_status st =
        sgrf_run_holder(model.get(), points.get(), replicate_count(o, 10000), seed, tolerance(o, 1e-5), &r);
    emit(o, st, r);
  } else {
    throw Failure{kExitConfig, "unknown command '" + command + "'"};
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotropic Gaussian random fields on spheres: simulation and verification"};
  app.require_subcommand(1);
  Options o;
  static const char* const commands[][2] = {
      {"simulate", "Karhunen-Loeve samples on S^2"},
      {"simulate-spacetime", "Samples on S^2 x time grid"},
      {"covariance", "Covariance matrix over a point set"},
      {"verify-malyarenko", "Small-angle incremental variance against the power-tail asymptote"},
      {"verify-hilbert", "Hilbert-sphere increment against its asymptote"},
      {"verify-identity", "Jacobi difference identity and increment-form agreement"},
      {"classify", "Continuity and regularity report"},
      {"fraclap", "Apply a fractional Laplacian power to a model"},
      {"holder", "Variogram Hoelder estimate from simulated samples"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--model", o.model, "Model document (aps-v1 JSON)");
    sub->add_option("--out", o.out, "Output path; stdout when omitted (non-stochastic commands)");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--tol", o.tol, "Series truncation tolerance");
    sub->add_option("--replicates", o.replicates, "Number of replicates");
    sub->add_option("--points", o.points, "grid:lat-lon:NxM | greatcircle:N[:d] | random:N:seed[:d] | CSV path");
    sub->add_option("--times", o.times, "start:step:count");
    sub->add_option("--L", o.L, "Truncation degree");
    sub->add_option("--gamma", o.gamma, "Exponent for summability and integrability");
    sub->add_option("--sigma", o.sigma, "Fractional exponent");
    sub->add_option("--v", o.v, "Comma-separated angles");
  }
  if (argc > 1 && argv[1][0] != '-') {
    const std::string first = argv[1];
    bool known = false;
    for (const auto& c : commands) known = known || first == c[0];
    if (!known) {
      std::cerr << "error: unknown command '" << first << "'\n";
      return kExitConfig;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    return run_command(app.get_subcommands().front()->get_name(), o);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
