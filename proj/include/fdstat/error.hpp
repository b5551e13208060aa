#pragma once

#include <stdexcept>
#include <string>

namespace fdstat {

enum class ErrorKind {
  Input,        // non-finite or malformed values
  Size,         // too few observations / wrong arity
  Degeneracy,   // zero spread where a positive scale is required
  Domain,       // point outside the set an operation is defined on
  Singularity,  // boundary where a closed form blows up
  Parameter,    // invalid configuration value
  Parse,        // JSON / CSV syntax
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* to_string(ErrorKind kind) noexcept;

}  // namespace fdstat
