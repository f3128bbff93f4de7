#include "tail.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sphgrf/error.hpp"

namespace sgrf {

const char* to_string(TailKind kind) noexcept {
  switch (kind) {
    case TailKind::None: return "none";
    case TailKind::Power: return "power";
    case TailKind::LogOnly: return "log_only";
    case TailKind::Geometric: return "geometric";
  }
  return "unknown";
}

TailKind tail_kind_from_string(const std::string& name) {
  if (name == "none") return TailKind::None;
  if (name == "power") return TailKind::Power;
  if (name == "log_only") return TailKind::LogOnly;
  if (name == "geometric") return TailKind::Geometric;
  throw ConfigError("unknown tail kind '" + name + "'");
}

namespace detail {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Beyond this log-degree, 1/n is below double resolution relative to 1.
constexpr double kAsymptoticLogDegree = 30.0;
}  // namespace

void validate_tail(const TailDescriptor& tail, double start) {
  if (!std::isfinite(tail.amplitude) || tail.amplitude < 0.0) {
    throw DomainError("tail amplitude must be finite and nonnegative");
  }
  switch (tail.kind) {
    case TailKind::None:
      return;
    case TailKind::Power:
      if (!(tail.gamma > 0.0) || !std::isfinite(tail.gamma)) throw DomainError("power tail needs gamma > 0");
      if (!std::isfinite(tail.k)) throw DomainError("power tail needs a finite k");
      if (tail.k != 0.0) {
        if (start < 2.0) throw DomainError("power tail with a log factor must start at degree >= 2");
        if (!(tail.gamma * std::log(start) + tail.k > 0.0)) {
          throw DomainError("power tail is not decreasing from its first degree");
        }
      } else if (start < 1.0) {
        throw DomainError("power tail must start at degree >= 1");
      }
      return;
    case TailKind::LogOnly:
      if (!(tail.k > 0.0) || !std::isfinite(tail.k)) throw DomainError("log_only tail needs k > 0");
      if (start < 2.0) throw DomainError("log_only tail must start at degree >= 2");
      return;
    case TailKind::Geometric:
      if (!(tail.r > 0.0 && tail.r < 1.0)) throw DomainError("geometric tail needs r in (0, 1)");
      return;
  }
}

double tail_log_mass(const TailDescriptor& tail, double t) {
  if (tail.amplitude <= 0.0) return kNegInf;
  const double la = std::log(tail.amplitude);
  switch (tail.kind) {
    case TailKind::None:
      return kNegInf;
    case TailKind::Power:
      return la - tail.gamma * t - (tail.k != 0.0 ? tail.k * std::log(t) : 0.0);
    case TailKind::LogOnly:
      return la - tail.k * std::log(t);
    case TailKind::Geometric:
      // r^n with n = e^t; overflow of e^t just drives the mass to zero.
      return la + std::exp(t) * std::log(tail.r);
  }
  return kNegInf;
}

namespace {

// log A(n+1) - log A(n), accurate when the difference is tiny.
double log_mass_step(const TailDescriptor& tail, double n) {
  const double l1 = std::log1p(1.0 / n);
  switch (tail.kind) {
    case TailKind::Power: {
      double step = -tail.gamma * l1;
      if (tail.k != 0.0) step -= tail.k * std::log1p(l1 / std::log(n));
      return step;
    }
    case TailKind::LogOnly:
      return -tail.k * std::log1p(l1 / std::log(n));
    case TailKind::Geometric:
      return std::log(tail.r);
    case TailKind::None:
      break;
  }
  return 0.0;
}

}  // namespace

double tail_log_coefficient(const TailDescriptor& tail, double n) {
  if (tail.kind == TailKind::None || tail.amplitude <= 0.0) return kNegInf;
  const double step = log_mass_step(tail, n);
  return tail_log_mass(tail, std::log(n)) + std::log(-std::expm1(step));
}

double tail_log_density(const TailDescriptor& tail, double t) {
  if (tail.kind == TailKind::None || tail.amplitude <= 0.0) return kNegInf;
  if (t < kAsymptoticLogDegree) return t + tail_log_coefficient(tail, std::exp(t));
  const double lm = tail_log_mass(tail, t);
  switch (tail.kind) {
    case TailKind::Power:
      return lm + std::log(tail.gamma + tail.k / t);
    case TailKind::LogOnly:
      return lm + std::log(tail.k / t);
    case TailKind::Geometric:
      return lm + t + std::log(-std::log(tail.r));
    case TailKind::None:
      break;
  }
  return kNegInf;
}

double log_laplace_factor(double t, double lambda) {
  if (t < 0.0) {
    const double n = std::exp(t);
    return std::log1p(n * (n + 2.0 * lambda));
  }
  return 2.0 * t + std::log1p(2.0 * lambda * std::exp(-t) + std::exp(-2.0 * t));
}

}  // namespace detail
}  // namespace sgrf
