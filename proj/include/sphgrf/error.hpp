#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgrf {

enum class ErrorCode {
  Domain = 1,
  Config = 2,
  Truncation = 3,
  NotPositiveDefinite = 4,
  Divergent = 5,
  Io = 6,
  Unsupported = 7,
  Overflow = 8,
  Numerical = 9,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every exception thrown by the library. Carries a stable code so the
/// C API can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ErrorCode::Overflow, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(ErrorCode::Divergent, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

/// A series could not be truncated to the requested tolerance within the
/// iteration cap. Reports the best bound reached and the degree it would need.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double achieved_bound, std::size_t required_terms)
      : Error(ErrorCode::Truncation, what),
        achieved_bound_(achieved_bound),
        required_terms_(required_terms) {}
  double achieved_bound() const noexcept { return achieved_bound_; }
  /// 0 when the requirement could not be estimated.
  std::size_t required_terms() const noexcept { return required_terms_; }

 private:
  double achieved_bound_;
  std::size_t required_terms_;
};

class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(const std::string& what, double last_jitter)
      : Error(ErrorCode::NotPositiveDefinite, what), last_jitter_(last_jitter) {}
  double last_jitter() const noexcept { return last_jitter_; }

 private:
  double last_jitter_;
};

}  // namespace sgrf
