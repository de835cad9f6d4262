// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mosur Authors

#pragma once

#include <stdexcept>
#include <string>

namespace mosur {

enum class ErrorCode {
  invalid_argument = 1,
  model_fit,
  duplicate_point,
  io,
  parse,
  capacity,
  oracle_violation,
  internal,
};

// Every failure raised by the library carries one of the codes above so the
// C layer can translate it without string matching.
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

inline void require(bool condition, const char* what) {
  if (!condition) fail(ErrorCode::invalid_argument, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::invalid_argument, what);
}

}  // namespace mosur
