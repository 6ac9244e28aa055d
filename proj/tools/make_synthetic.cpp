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

// Writes the bundled synthetic datasets.
//
//   make_synthetic adult ROWS SEED OUT.csv
//   make_synthetic disparity ROWS SEED GROUPS OUT.csv

#include <fstream>
#include <iostream>
#include <string>

#include "fairred/csv.hpp"
#include "fairred/data.hpp"
#include "fairred/error.hpp"
#include "fairred/synthetic.hpp"

int main(int argc, char** argv) {
  using namespace fairred;
  const std::string usage =
      "usage: make_synthetic adult ROWS SEED OUT.csv\n"
      "       make_synthetic disparity ROWS SEED GROUPS OUT.csv\n";
  try {
    const std::string kind = argc > 1 ? argv[1] : "";
    if (kind == "adult" && argc == 5) {
      const csv::Table table = SyntheticAdult(std::stol(argv[2]), std::stoull(argv[3]));
      std::ofstream out(argv[4], std::ios::binary);
      csv::WriteRow(out, table.header);
      for (const auto& row : table.rows) csv::WriteRow(out, row);
      return out ? 0 : 4;
    }
    if (kind == "disparity" && argc == 6) {
      const TrainingSet ts =
          SyntheticDisparity(std::stol(argv[2]), std::stoull(argv[3]), std::stoi(argv[4]));
      std::ofstream out(argv[5], std::ios::binary);
      WriteCsv(out, ts);
      return out ? 0 : 4;
    }
    std::cerr << usage;
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << ErrorCategory(e.kind()) << ": " << e.what() << '\n';
    return ExitStatus(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: usage: " << e.what() << '\n' << usage;
    return 2;
  }
}
