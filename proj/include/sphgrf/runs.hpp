#pragma once

// Batch analyses behind the command-line front end. Each run returns its
// primary text (CSV or JSON) and an optional JSON sidecar; the front end
// only writes them out.

#include <cstdint>
#include <string>
#include <vector>

#include "sphgrf/model_io.hpp"
#include "sphgrf/specfun.hpp"

namespace sgrf {

struct RunOutput {
  std::string primary;
  std::string format;   // "csv" or "json"
  std::string sidecar;  // empty when there is none
};

/// Default tolerances of the batch analyses.
inline constexpr double kDefaultRunTol = 1e-6;
inline constexpr double kDefaultHolderTol = 1e-5;

/// `L` itself when L >= 0. Otherwise the head degree, which requires a
/// spectrum without tail (ConfigError otherwise).
int resolve_truncation_degree(const AngularPowerSpectrum& spec, int L);

/// `L < 0` selects the head degree, which requires a spectrum without tail.
RunOutput run_simulate(const ModelDocument& model, int L, const std::vector<SpherePoint>& points, int replicates,
                       std::uint64_t seed);
RunOutput run_simulate_spacetime(const ModelDocument& model, int L, const std::vector<SpherePoint>& points,
                                 const std::vector<double>& times, int replicates, std::uint64_t seed);
RunOutput run_covariance(const ModelDocument& model, const std::vector<SpherePoint>& points,
                         const std::vector<double>& times, double tol);
RunOutput run_malyarenko(const ModelDocument& model, const std::vector<double>& v);
RunOutput run_hilbert(const ModelDocument& model, const std::vector<double>& v);
/// `model` may be null, in which case only the polynomial identity is checked.
RunOutput run_identity(const ModelDocument* model, double tol);
/// `gamma > 0` adds summability and integrability decisions for that exponent.
RunOutput run_classify(const ModelDocument& model, double gamma = 0.0);
RunOutput run_fraclap(const ModelDocument& model, double sigma);
RunOutput run_holder(const ModelDocument& model, const std::vector<SpherePoint>& points, int replicates,
                     std::uint64_t seed, double tol);

}  // namespace sgrf
