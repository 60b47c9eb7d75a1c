// Copyright 2026 The alphafair Authors
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

#include <span>
#include <string>
#include <vector>

#include "alphafair/model.hpp"
#include "alphafair/solver.hpp"

namespace alphafair {

// -- files ------------------------------------------------------------------

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory plus rename, so readers never
// observe a partial document.
void atomic_write_file(const std::string& path, const std::string& content);

// -- problem / allocation documents ------------------------------------------

RawProblem parse_problem_json(const std::string& text);
RawProblem load_problem(const std::string& path);
std::string problem_to_json(const RawProblem& raw);
void save_problem(const std::string& path, const RawProblem& raw);

struct AllocationFile {
  std::vector<double> x;
  bool normalized = true;
  double scale_c = 1.0;
  std::string method;        // optional; present for oracle output
  double kkt_residual = -1;  // optional; < 0 means absent
};

std::string allocation_to_json(const AllocationFile& alloc);
AllocationFile parse_allocation_json(const std::string& text);
void save_allocation(const std::string& path, const AllocationFile& alloc);
AllocationFile load_allocation(const std::string& path);

// -- numbers and hashing ------------------------------------------------------

/// Shortest decimal form that round-trips the exact double (inf/nan spelled
/// "inf"/"-inf"/"nan").
std::string format_double(double v);

/// FNV-1a over the canonical problem serialization, as 16 hex digits. The
/// instance name is excluded; only mathematical content counts.
std::string problem_hash(const RawProblem& raw);

// -- trace / report / tables --------------------------------------------------

extern const char* const kTraceCsvHeader;
std::string trace_row_csv(const RoundRecord& rec);
std::string trace_to_csv(std::span<const RoundRecord> trace);
void save_trace_csv(const std::string& path, std::span<const RoundRecord> trace);

std::string report_to_json(const SolveReport& report, const std::string& problem_hash);
void save_report_json(const std::string& path, const SolveReport& report,
                      const std::string& problem_hash);

}  // namespace alphafair
