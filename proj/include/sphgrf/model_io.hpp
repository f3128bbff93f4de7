#pragma once

// Model documents, schema "aps-v1":
//
//   {
//     "schema": "aps-v1",
//     "lambda": 0.5,                 // or "infinity"; may be replaced by "dimension": d
//     "dimension": 2,                // optional when lambda is given
//     "scale": 1.0,                  // optional, default 1
//     "head": [a_0, ..., a_L],
//     "tail": {                      // optional, default none
//       "kind": "power" | "log_only" | "geometric" | "none",
//       "gamma": g, "k": k, "r": r,  // as used by the kind
//       "amplitude": c,              // A_n = c * profile(n) for n > L
//       "start": s,                  // alternative to head + amplitude: A_n = profile(n)/profile(s) for n >= s
//       "sigma": s                   // optional fractional exponent carried by the tail
//     },
//     "normalize": false,            // optional: rescale to total mass 1 on load
//     "temporal": [{"kind": "gauss" | "expdecay" | "rational", "b": 1.0}, ...],
//     "c_l": [1.0, ...]
//   }
//
// Unknown keys are rejected. Serialization writes the explicit head + amplitude
// form, so parse(serialize(m)) == m.

#include <cstdint>
#include <string>
#include <vector>

#include "sphgrf/covariance.hpp"
#include "sphgrf/spectrum.hpp"

namespace sgrf {

inline constexpr const char* kModelSchema = "aps-v1";

struct ModelDocument {
  AngularPowerSpectrum spectrum;
  std::vector<TemporalCF> temporal;  // empty for purely spatial models
  std::vector<double> c_l;           // empty means all ones

  bool is_spacetime() const noexcept { return !temporal.empty(); }
  /// Throws ConfigError when the document has no temporal section.
  SpaceTimeCovarianceModel spacetime() const;
};

/// Throws ConfigError on malformed JSON or schema violations, and the
/// library's domain errors on invalid values.
ModelDocument parse_model(const std::string& json_text);
/// Throws IoError when the file cannot be read.
ModelDocument load_model(const std::string& path);
/// Canonical JSON text (deterministic key order and number formatting).
std::string serialize_model(const ModelDocument& model);
/// 64-bit FNV-1a of the canonical serialization.
std::uint64_t model_hash(const ModelDocument& model);
std::string model_hash_hex(const ModelDocument& model);

}  // namespace sgrf
