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

#include "fairred/error.hpp"

namespace fairred {

std::string_view ErrorCategory(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kDegenerateData: return "degenerate-data";
    case ErrorKind::kNotApplicable: return "not-applicable";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kCompatibility: return "compatibility";
    case ErrorKind::kArtifact: return "artifact";
  }
  return "unknown";
}

int ExitStatus(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kArgument:
    case ErrorKind::kSchema:
      return 2;
    case ErrorKind::kNotApplicable:
    case ErrorKind::kDegenerateData:
      return 3;
    case ErrorKind::kParse:
    case ErrorKind::kEmptyInput:
    case ErrorKind::kCompatibility:
    case ErrorKind::kArtifact:
      return 4;
    case ErrorKind::kNumeric:
      return 5;
  }
  return 1;
}

}  // namespace fairred
