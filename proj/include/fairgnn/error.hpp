// Copyright 2026 The FairGNN Authors.
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

#include <stdexcept>
#include <string>

namespace fairgnn {

// Error taxonomy. Each kind maps onto one C API status code.
enum class ErrorKind {
  kStructural,  // shape mismatch, malformed graph
  kConfig,      // invalid configuration or capacity violation
  kDomain,      // argument outside its mathematical domain
  kIo,          // file access or parse failure
  kContract,    // API misuse (e.g. backward on a non-scalar)
  kNumeric,     // divergence, non-finite values
  kConstraint,  // infeasible constraint system
  kSearch,      // hyperparameter search failure
  kUndefined,   // metric undefined on the given data
  kSchema,      // well-formed input with invalid values (e.g. non-binary label)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace fairgnn
