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

#include "alphafair/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "alphafair/errors.hpp"

namespace alphafair {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(ErrorCode::io, "error reading file: " + path);
  return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::io, "cannot open file for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) raise(ErrorCode::io, "error writing file: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    raise(ErrorCode::io, "cannot move temp file into place: " + path + " (" +
                             ec.message() + ")");
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// -- problem documents --------------------------------------------------------

static double require_number(const json& j, const std::string& what) {
  if (!j.is_number()) raise(ErrorCode::parse, what + " must be a number");
  return j.get<double>();
}

RawProblem parse_problem_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded())
    raise(ErrorCode::parse, "malformed problem document: invalid syntax");
  if (!doc.is_object())
    raise(ErrorCode::parse, "malformed problem document: top level must be an object");
  for (const char* key : {"alpha", "weights", "b", "entries"})
    if (!doc.contains(key))
      raise(ErrorCode::parse,
            std::string("malformed problem document: missing key '") + key + "'");

  RawProblem raw;
  raw.alpha = require_number(doc["alpha"], "alpha");
  if (!doc["weights"].is_array() || !doc["b"].is_array() || !doc["entries"].is_array())
    raise(ErrorCode::parse, "weights, b and entries must be arrays");
  for (const auto& v : doc["weights"]) raw.weights.push_back(require_number(v, "weight"));
  for (const auto& v : doc["b"]) raw.b.push_back(require_number(v, "rhs value"));
  raw.n = raw.weights.size();
  raw.m = raw.b.size();
  for (const auto& e : doc["entries"]) {
    if (!e.is_array() || e.size() != 3)
      raise(ErrorCode::parse, "each entry must be an [i, j, value] triple");
    if (!e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<std::int64_t>() < 0 || e[1].get<std::int64_t>() < 0)
      raise(ErrorCode::parse, "entry indices must be nonnegative integers");
    raw.entries.push_back(Entry{static_cast<std::size_t>(e[0].get<std::int64_t>()),
                                static_cast<std::size_t>(e[1].get<std::int64_t>()),
                                require_number(e[2], "entry value")});
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) raise(ErrorCode::parse, "name must be a string");
    raw.name = doc["name"].get<std::string>();
  }
  raw.validate();
  return raw;
}

RawProblem load_problem(const std::string& path) {
  return parse_problem_json(read_file(path));
}

static json problem_body(const RawProblem& raw) {
  json doc;
  if (!raw.name.empty()) doc["name"] = raw.name;
  doc["alpha"] = raw.alpha;
  doc["weights"] = raw.weights;
  doc["b"] = raw.b;
  std::vector<Entry> sorted = raw.entries;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  json entries = json::array();
  for (const Entry& e : sorted) entries.push_back({e.row, e.col, e.value});
  doc["entries"] = std::move(entries);
  return doc;
}

std::string problem_to_json(const RawProblem& raw) {
  return problem_body(raw).dump(2) + "\n";
}

void save_problem(const std::string& path, const RawProblem& raw) {
  raw.validate();
  atomic_write_file(path, problem_to_json(raw));
}

// -- allocation documents -----------------------------------------------------

std::string allocation_to_json(const AllocationFile& alloc) {
  json doc;
  doc["x"] = alloc.x;
  doc["normalized"] = alloc.normalized;
  doc["scale_c"] = alloc.scale_c;
  if (!alloc.method.empty()) doc["method"] = alloc.method;
  if (alloc.kkt_residual >= 0.0) doc["kkt_residual"] = alloc.kkt_residual;
  return doc.dump(2) + "\n";
}

AllocationFile parse_allocation_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    raise(ErrorCode::parse, "malformed allocation document");
  AllocationFile alloc;
  if (!doc.contains("x") || !doc["x"].is_array())
    raise(ErrorCode::parse, "allocation document needs an 'x' array");
  for (const auto& v : doc["x"]) alloc.x.push_back(require_number(v, "x value"));
  if (doc.contains("normalized")) alloc.normalized = doc["normalized"].get<bool>();
  if (doc.contains("scale_c")) alloc.scale_c = require_number(doc["scale_c"], "scale_c");
  if (doc.contains("method")) alloc.method = doc["method"].get<std::string>();
  if (doc.contains("kkt_residual"))
    alloc.kkt_residual = require_number(doc["kkt_residual"], "kkt_residual");
  return alloc;
}

void save_allocation(const std::string& path, const AllocationFile& alloc) {
  atomic_write_file(path, allocation_to_json(alloc));
}

AllocationFile load_allocation(const std::string& path) {
  return parse_allocation_json(read_file(path));
}

// -- hashing ------------------------------------------------------------------

std::string problem_hash(const RawProblem& raw) {
  RawProblem anon = raw;
  anon.name.clear();
  const std::string canon = problem_body(anon).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// -- trace / report -----------------------------------------------------------

const char* const kTraceCsvHeader =
    "round,objective,potential,gap,max_violation,n_inc,n_dec,n_clamped,"
    "stationary,acs1,acs2,acs3";

std::string trace_row_csv(const RoundRecord& r) {
  std::string out;
  out.reserve(128);
  out += std::to_string(r.round);
  out += ',';
  out += format_double(r.objective);
  out += ',';
  out += format_double(r.potential);
  out += ',';
  out += format_double(r.gap);
  out += ',';
  out += format_double(r.max_violation);
  out += ',';
  out += std::to_string(r.n_inc);
  out += ',';
  out += std::to_string(r.n_dec);
  out += ',';
  out += std::to_string(r.n_clamped);
  out += ',';
  out += stationary_name(r.stationary);
  out += ',';
  out += r.acs1 ? '1' : '0';
  out += ',';
  out += r.acs2 ? '1' : '0';
  out += ',';
  out += r.acs3 ? '1' : '0';
  return out;
}

std::string trace_to_csv(std::span<const RoundRecord> trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const RoundRecord& r : trace) {
    out += trace_row_csv(r);
    out += '\n';
  }
  return out;
}

void save_trace_csv(const std::string& path, std::span<const RoundRecord> trace) {
  atomic_write_file(path, trace_to_csv(trace));
}

static json finite_or_null(double v) {
  if (std::isnan(v) || std::isinf(v)) return nullptr;
  return v;
}

std::string report_to_json(const SolveReport& report, const std::string& hash) {
  json doc;
  doc["problem_hash"] = hash;
  doc["epsilon"] = report.epsilon_requested;
  json regime;
  regime["mode"] = regime_mode_name(report.regime.mode);
  regime["effective_alpha"] = report.regime.effective_alpha;
  regime["tiny_threshold"] = report.regime.tiny_threshold;
  regime["near_one_window"] = report.regime.near_one_window;
  doc["regime"] = std::move(regime);
  json params;
  params["epsilon"] = report.params.epsilon;
  params["alpha_effective"] = report.params.alpha_effective;
  params["gamma"] = report.params.gamma;
  params["C"] = report.params.C;
  params["log_C"] = report.params.log_C;
  params["kappa"] = report.params.kappa;
  params["beta1"] = report.params.beta1;
  params["beta2"] = report.params.beta2;
  params["delta_min"] = report.params.delta_min;
  params["delta_max"] = report.params.delta_max;
  params["tau0"] = report.params.tau0;
  params["tau1"] = report.params.tau1;
  params["delta"] = report.params.delta;
  doc["params"] = std::move(params);
  doc["stop_reason"] = stop_reason_name(report.stop);
  doc["rounds_used"] = report.rounds_used;
  doc["best_round"] = report.best_round;
  doc["best_gap"] = finite_or_null(report.best_gap);
  doc["best_objective"] = finite_or_null(report.best_objective);
  return doc.dump(2) + "\n";
}

void save_report_json(const std::string& path, const SolveReport& report,
                      const std::string& hash) {
  atomic_write_file(path, report_to_json(report, hash));
}

}  // namespace alphafair
