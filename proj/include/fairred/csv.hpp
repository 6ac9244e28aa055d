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

// Minimal RFC 4180 reader and writer.

#ifndef FAIRRED_CSV_HPP_
#define FAIRRED_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace fairred::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
};

// Parses a whole stream. Quoted fields may contain commas, doubled quotes and
// line breaks. A trailing newline does not produce an empty record; CRLF is
// accepted. Throws Error(kParse) on an unterminated quote or a record whose
// width differs from the header, Error(kEmptyInput) when there is no header.
Table Read(std::istream& in);
Table ReadFile(const std::string& path);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string Escape(const std::string& field);
void WriteRow(std::ostream& out, const Row& row);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace fairred::csv

#endif  // FAIRRED_CSV_HPP_
