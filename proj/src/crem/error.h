// Copyright 2026 The crem Authors
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

#ifndef CREM_ERROR_H_
#define CREM_ERROR_H_

#include <stdexcept>
#include <string>

namespace crem {

// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  kUsage = 1,
  kInput = 2,
  kProtocol = 3,
  kInternal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCode::kUsage, what) {}
};

// Unreadable files, malformed records. `line` is 1-based, 0 when unknown.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, long line = 0)
      : Error(ErrorCode::kInput, line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Failures talking to an external scorer or detector process. Transport
// failures (the child died, a pipe broke) are retryable on a fresh process;
// malformed or mismatched replies are not.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string& what, bool retryable)
      : Error(ErrorCode::kProtocol, what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace crem

#endif  // CREM_ERROR_H_
