#include "sphgrf/error.hpp"

namespace sgrf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Truncation: return "truncation error";
    case ErrorCode::NotPositiveDefinite: return "matrix not positive definite";
    case ErrorCode::Divergent: return "divergent series";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Numerical: return "numerical failure";
  }
  return "unknown error";
}

}  // namespace sgrf
