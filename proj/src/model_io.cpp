#include "sphgrf/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sphgrf/error.hpp"

namespace sgrf {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!names.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double number_field(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' in " + where + " must be a number");
  return v.get<double>();
}

double optional_number(const Json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number_field(obj, key, where) : fallback;
}

std::vector<double> number_array(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& x : v) {
    if (!x.is_number()) throw ConfigError(where + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

GegenbauerIndex parse_lambda(const Json& doc, std::optional<int>& dimension) {
  if (doc.contains("dimension")) {
    const Json& d = doc["dimension"];
    if (!d.is_number_integer()) throw ConfigError("'dimension' must be an integer");
    dimension = d.get<int>();
  }
  if (doc.contains("lambda")) {
    const Json& l = doc["lambda"];
    if (l.is_string()) {
      const auto s = l.get<std::string>();
      if (s != "infinity") throw ConfigError("'lambda' must be a number or \"infinity\"");
      return GegenbauerIndex::infinite();
    }
    if (!l.is_number()) throw ConfigError("'lambda' must be a number or \"infinity\"");
    return GegenbauerIndex::finite(l.get<double>());
  }
  if (!dimension) throw ConfigError("model needs 'lambda' or 'dimension'");
  return GegenbauerIndex::from_dimension(*dimension);
}

TailDescriptor parse_tail_shape(const Json& t, TailKind kind) {
  const std::string where = "tail";
  switch (kind) {
    case TailKind::None: return TailDescriptor::none();
    case TailKind::Power:
      return TailDescriptor::power(number_field(t, "gamma", where), optional_number(t, "k", 0.0, where), 1.0);
    case TailKind::LogOnly: return TailDescriptor::log_only(number_field(t, "k", where), 1.0);
    case TailKind::Geometric: return TailDescriptor::geometric(number_field(t, "r", where), 1.0);
  }
  return TailDescriptor::none();
}

Json lambda_json(GegenbauerIndex lambda) {
  if (lambda.is_infinite()) return "infinity";
  return lambda.value();
}

Json tail_json(const AngularPowerSpectrum& spec) {
  const TailDescriptor& t = spec.base_tail();
  Json out = Json::object();
  out["kind"] = to_string(t.kind);
  switch (t.kind) {
    case TailKind::None: return out;
    case TailKind::Power:
      out["gamma"] = t.gamma;
      out["k"] = t.k;
      break;
    case TailKind::LogOnly: out["k"] = t.k; break;
    case TailKind::Geometric: out["r"] = t.r; break;
  }
  out["amplitude"] = t.amplitude;
  if (spec.tail_sigma() != 0.0) out["sigma"] = spec.tail_sigma();
  return out;
}

}  // namespace

SpaceTimeCovarianceModel ModelDocument::spacetime() const {
  if (temporal.empty()) throw ConfigError("model has no 'temporal' section");
  return SpaceTimeCovarianceModel(spectrum, temporal, c_l.empty() ? std::vector<double>{1.0} : c_l);
}

ModelDocument parse_model(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("model document must be a JSON object");
  try {
    reject_unknown_keys(doc, {"schema", "lambda", "dimension", "scale", "head", "tail", "normalize", "temporal", "c_l"},
                        "model");
    if (!doc.contains("schema") || !doc["schema"].is_string() || doc["schema"].get<std::string>() != kModelSchema) {
      throw ConfigError(std::string("model 'schema' must be \"") + kModelSchema + "\"");
    }
    std::optional<int> dimension;
    const GegenbauerIndex lambda = parse_lambda(doc, dimension);
    const double scale = optional_number(doc, "scale", 1.0, "model");

    TailDescriptor tail = TailDescriptor::none();
    double sigma = 0.0;
    std::optional<int> start;
    if (doc.contains("tail")) {
      const Json& t = doc["tail"];
      if (!t.is_object()) throw ConfigError("'tail' must be an object");
      reject_unknown_keys(t, {"kind", "gamma", "k", "r", "amplitude", "start", "sigma"}, "tail");
      if (!t.contains("kind") || !t["kind"].is_string()) throw ConfigError("'tail.kind' must be a string");
      const TailKind kind = tail_kind_from_string(t["kind"].get<std::string>());
      tail = parse_tail_shape(t, kind);
      sigma = optional_number(t, "sigma", 0.0, "tail");
      if (t.contains("start")) {
        if (!t["start"].is_number_integer()) throw ConfigError("'tail.start' must be an integer");
        if (t.contains("amplitude")) throw ConfigError("'tail.start' and 'tail.amplitude' are exclusive");
        start = t["start"].get<int>();
      } else if (kind != TailKind::None) {
        tail.amplitude = number_field(t, "amplitude", "tail");
      }
    }

    std::optional<AngularPowerSpectrum> spectrum;
    if (start) {
      if (doc.contains("head")) throw ConfigError("'head' cannot be combined with 'tail.start'");
      if (tail.kind == TailKind::None) throw ConfigError("'tail.start' needs a nonempty tail kind");
      spectrum = AngularPowerSpectrum::from_tail(lambda, tail, *start, scale);
      if (dimension && spectrum->dimension() != dimension) throw DomainError("lambda does not match dimension");
      if (sigma != 0.0) spectrum = fractional_transform(*spectrum, sigma, false);
    } else {
      if (!doc.contains("head")) throw ConfigError("model needs 'head' (or 'tail.start')");
      spectrum.emplace(lambda, scale, number_array(doc["head"], "'head'"), tail, dimension, sigma);
    }
    if (doc.contains("normalize")) {
      if (!doc["normalize"].is_boolean()) throw ConfigError("'normalize' must be a boolean");
      if (doc["normalize"].get<bool>()) spectrum = normalize(*spectrum);
    }

    ModelDocument model{*spectrum, {}, {}};
    if (doc.contains("temporal")) {
      const Json& list = doc["temporal"];
      if (!list.is_array() || list.empty()) throw ConfigError("'temporal' must be a nonempty array");
      for (const Json& item : list) {
        if (!item.is_object()) throw ConfigError("'temporal' entries must be objects");
        reject_unknown_keys(item, {"kind", "b"}, "temporal entry");
        if (!item.contains("kind") || !item["kind"].is_string()) throw ConfigError("'temporal.kind' must be a string");
        model.temporal.emplace_back(temporal_kind_from_string(item["kind"].get<std::string>()),
                                    number_field(item, "b", "temporal entry"));
      }
    }
    if (doc.contains("c_l")) {
      model.c_l = number_array(doc["c_l"], "'c_l'");
      if (model.c_l.empty()) throw ConfigError("'c_l' must not be empty");
      for (double c : model.c_l) {
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constants c_l must be positive and finite");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid model document: ") + e.what());
  }
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read model file '" + path + "'");
  return parse_model(buf.str());
}

std::string serialize_model(const ModelDocument& model) {
  const AngularPowerSpectrum& spec = model.spectrum;
  Json doc = Json::object();
  doc["schema"] = kModelSchema;
  doc["lambda"] = lambda_json(spec.lambda());
  if (spec.dimension()) doc["dimension"] = *spec.dimension();
  doc["scale"] = spec.scale();
  doc["head"] = std::vector<double>(spec.head().begin(), spec.head().end());
  doc["tail"] = tail_json(spec);
  if (!model.temporal.empty()) {
    Json list = Json::array();
    for (const TemporalCF& cf : model.temporal) list.push_back(Json{{"kind", to_string(cf.kind)}, {"b", cf.b}});
    doc["temporal"] = list;
  }
  if (!model.c_l.empty()) doc["c_l"] = model.c_l;
  return doc.dump(2) + "\n";
}

std::uint64_t model_hash(const ModelDocument& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_model(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string model_hash_hex(const ModelDocument& model) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(model_hash(model)));
  return buf;
}

}  // namespace sgrf
