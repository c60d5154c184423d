#pragma once

#include <stdexcept>
#include <string>

namespace palab {

// Numeric values are part of the C API (see palab.h) and must stay stable.
enum class ErrorCode : int {
  validation = 1,
  dimension = 2,
  domain = 3,
  rank = 4,
  resource = 5,
  extraction = 6,
  degenerate = 7,
  usage = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& w) : Error(ErrorCode::validation, w) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorCode::dimension, w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};

struct RankError : Error {
  explicit RankError(const std::string& w) : Error(ErrorCode::rank, w) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorCode::resource, w) {}
};

struct DegenerateError : Error {
  explicit DegenerateError(const std::string& w) : Error(ErrorCode::degenerate, w) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error(ErrorCode::usage, w) {}
};

}  // namespace palab
