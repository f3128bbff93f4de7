#pragma once

// Point-set and grid specifications used by the command-line front end.

#include <string>
#include <vector>

#include "sphgrf/specfun.hpp"

namespace sgrf {

/// Parses one of
///   grid:lat-lon:NxM     N colatitudes (cell centres) by M longitudes on S^2
///   greatcircle:N        N equispaced points on the equator of S^2
///   greatcircle:N:d      the same on S^d
///   random:N:seed        N uniform points on S^2
///   random:N:seed:d      N uniform points on S^d
///   <path>               CSV file with one point per row (x_0, ..., x_d),
///                        optional non-numeric header row
/// Throws ConfigError for malformed specifications and IoError for unreadable files.
std::vector<SpherePoint> parse_points(const std::string& spec);

/// "start:step:count" -> start, start + step, ..., count values; step > 0.
std::vector<double> parse_times(const std::string& spec);

/// Comma-separated list of reals.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace sgrf
