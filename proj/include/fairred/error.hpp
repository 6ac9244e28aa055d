// Copyright 2026 The Authors.
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

#ifndef FAIRRED_ERROR_HPP_
#define FAIRRED_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairred {

enum class ErrorKind {
  kUsage,
  kArgument,
  kSchema,
  kParse,
  kEmptyInput,
  kDegenerateData,
  kNotApplicable,
  kNumeric,
  kCompatibility,
  kArtifact,
};

// Stable lower-case tag printed on the CLI error line.
std::string_view ErrorCategory(ErrorKind kind);

// Process exit status for an error of the given kind:
// 2 usage, 3 not-applicable, 4 artifact/parse, 5 numeric.
int ExitStatus(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fairred

#endif  // FAIRRED_ERROR_HPP_
