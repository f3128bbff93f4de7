#include "sphgrf/points.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "sphgrf/analysis.hpp"
#include "sphgrf/error.hpp"
#include "sphgrf/rng.hpp"

namespace sgrf {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

template <typename T>
T parse_integer(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  T value{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end) throw ConfigError("invalid " + what + " '" + raw + "'");
  return value;
}

int positive_count(const std::string& raw, const std::string& what) {
  const int n = parse_integer<int>(raw, what);
  if (n < 1) throw ConfigError(what + " must be >= 1");
  return n;
}

std::vector<SpherePoint> lat_lon_grid(int n_lat, int n_lon) {
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(n_lat) * n_lon);
  for (int i = 0; i < n_lat; ++i) {
    const double colat = (i + 0.5) * std::numbers::pi / n_lat;
    for (int j = 0; j < n_lon; ++j) pts.push_back(SpherePoint::from_angles(colat, 2.0 * std::numbers::pi * j / n_lon));
  }
  return pts;
}

std::vector<SpherePoint> random_points(int count, std::uint64_t seed, int d) {
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  std::normal_distribution<double> normal;
  for (int i = 0; i < count; ++i) {
    auto engine = make_engine(RngSpec{seed, 0}, static_cast<std::uint64_t>(i), 0);
    std::vector<double> v(static_cast<std::size_t>(d) + 1);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& x : v) {
        x = normal(engine);
        norm2 += x * x;
      }
    } while (norm2 < 1e-20);
    pts.push_back(SpherePoint::normalized(std::move(v)));
  }
  return pts;
}

std::vector<SpherePoint> csv_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file '" + path + "'");
  std::vector<SpherePoint> pts;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> coords;
    bool numeric = true;
    for (const std::string& field : split(line, ',')) {
      double x = 0.0;
      if (!parse_double(field, x)) {
        numeric = false;
        break;
      }
      coords.push_back(x);
    }
    if (!numeric) {
      if (pts.empty() && line_no == 1) continue;  // header
      throw ConfigError("non-numeric row " + std::to_string(line_no) + " in '" + path + "'");
    }
    if (coords.size() < 3) throw ConfigError("point rows need at least 3 coordinates in '" + path + "'");
    if (width == 0) width = coords.size();
    if (coords.size() != width) throw ConfigError("inconsistent row width at line " + std::to_string(line_no));
    double norm2 = 0.0;
    for (double x : coords) norm2 += x * x;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) {
      throw ConfigError("point at line " + std::to_string(line_no) + " is not a unit vector");
    }
    pts.push_back(SpherePoint::normalized(std::move(coords)));
  }
  if (pts.empty()) throw ConfigError("point file '" + path + "' has no points");
  return pts;
}

}  // namespace

std::vector<SpherePoint> parse_points(const std::string& spec) {
  if (spec.rfind("grid:", 0) == 0) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3 || parts[1] != "lat-lon") throw ConfigError("grid spec must be grid:lat-lon:NxM");
    const auto dims = split(parts[2], 'x');
    if (dims.size() != 2) throw ConfigError("grid spec must be grid:lat-lon:NxM");
    return lat_lon_grid(positive_count(dims[0], "grid rows"), positive_count(dims[1], "grid columns"));
  }
  if (spec.rfind("greatcircle:", 0) == 0) {
    const auto parts = split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("great-circle spec must be greatcircle:N[:d]");
    const int d = parts.size() == 3 ? positive_count(parts[2], "sphere dimension") : 2;
    try {
      return great_circle_points(positive_count(parts[1], "point count"), d);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = split(spec, ':');
    if (parts.size() < 3 || parts.size() > 4) throw ConfigError("random spec must be random:N:seed[:d]");
    const int d = parts.size() == 4 ? positive_count(parts[3], "sphere dimension") : 2;
    if (d < 2) throw ConfigError("sphere dimension must be >= 2");
    return random_points(positive_count(parts[1], "point count"), parse_integer<std::uint64_t>(parts[2], "seed"), d);
  }
  return csv_points(spec);
}

std::vector<double> parse_times(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("time spec must be start:step:count");
  double start = 0.0;
  double step = 0.0;
  if (!parse_double(parts[0], start) || !parse_double(parts[1], step)) {
    throw ConfigError("time spec must be start:step:count");
  }
  if (!(step > 0.0)) throw ConfigError("time step must be positive");
  const int count = positive_count(parts[2], "time count");
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) times[i] = start + step * i;
  return times;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& field : split(text, ',')) {
    double x = 0.0;
    if (!parse_double(field, x)) throw ConfigError("invalid number '" + field + "' in list");
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

}  // namespace sgrf
