// Copyright 2026 The Purifier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef PURIFIER_COMMON_ERROR_HPP_
#define PURIFIER_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace purifier {

// Distinct codes so the CLI can map failures to stable exit statuses.
enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kNonFinite = 3,
  kParse = 4,
  kMissingArtifact = 5,
  kIo = 6,
  kConfig = 7,
  kFormat = 8,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace purifier

#endif  // PURIFIER_COMMON_ERROR_HPP_
