#pragma once

#include <stdexcept>
#include <string>

namespace asianspec {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  Pole,
  Underflow,
  Overflow,
  Convergence,
  TailBound,
  GridTooCoarse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Underflow: return "underflow";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Convergence: return "convergence failure";
    case ErrorCode::TailBound: return "truncation tail bound violated";
    case ErrorCode::GridTooCoarse: return "grid too coarse";
  }
  return "unknown";
}

}  // namespace asianspec
