// Copyright 2026 The twinfringe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twinfringe {

enum class ErrorCode {
  invalid_state,
  invalid_density,
  parameter,
  unsupported_closed_form,
  undefined_visibility,
  invalid_scan,
  parse,
  io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_state: return "invalid-state";
    case ErrorCode::invalid_density: return "invalid-density";
    case ErrorCode::parameter: return "parameter";
    case ErrorCode::unsupported_closed_form: return "unsupported-closed-form";
    case ErrorCode::undefined_visibility: return "undefined-visibility";
    case ErrorCode::invalid_scan: return "invalid-scan";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + " error: " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the pulse-sequence parser; `offset` is the byte offset into
/// the source text where the problem was detected.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::parse,
              "at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        detail_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

}  // namespace twinfringe
