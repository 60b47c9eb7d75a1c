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

#include "alphafair/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alphafair/errors.hpp"

namespace alphafair {

void RawProblem::validate() const {
  if (n == 0 || m == 0)
    raise(ErrorCode::invalid_problem, "degenerate problem: n and m must be >= 1");
  if (weights.size() != n)
    raise(ErrorCode::invalid_problem, "weights length does not match n");
  if (b.size() != m)
    raise(ErrorCode::invalid_problem, "rhs length does not match m");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    raise(ErrorCode::invalid_problem, "alpha must be a positive finite real");
  for (std::size_t j = 0; j < n; ++j)
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      raise(ErrorCode::invalid_problem,
            "nonpositive weight at index " + std::to_string(j));
  for (std::size_t i = 0; i < m; ++i)
    if (!(b[i] > 0.0) || !std::isfinite(b[i]))
      raise(ErrorCode::invalid_problem,
            "nonpositive rhs at index " + std::to_string(i));

  std::vector<std::uint8_t> column_used(n, 0);
  std::vector<Entry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Entry& e = sorted[k];
    if (e.row >= m || e.col >= n)
      raise(ErrorCode::invalid_problem, "entry index out of range");
    if (!(e.value > 0.0) || !std::isfinite(e.value))
      raise(ErrorCode::invalid_problem,
            "nonpositive matrix entry at (" + std::to_string(e.row) + ", " +
                std::to_string(e.col) + ")");
    if (k > 0 && sorted[k - 1].row == e.row && sorted[k - 1].col == e.col)
      raise(ErrorCode::invalid_problem, "duplicate matrix entry at (" +
                                            std::to_string(e.row) + ", " +
                                            std::to_string(e.col) + ")");
    column_used[e.col] = 1;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!column_used[j])
      raise(ErrorCode::invalid_problem,
            "unconstrained variable " + std::to_string(j) +
                " (appears in no constraint)");
}

SparseMatrix SparseMatrix::from_entries(std::size_t rows, std::size_t cols,
                                        std::vector<Entry> entries) {
  SparseMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;

  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });

  a.row_ptr_.assign(rows + 1, 0);
  a.row_index_.reserve(entries.size());
  a.row_values_.reserve(entries.size());
  for (const Entry& e : entries) {
    a.row_ptr_[e.row + 1]++;
    a.max_value_ = std::max(a.max_value_, e.value);
  }
  for (std::size_t i = 0; i < rows; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];
  for (const Entry& e : entries) {
    a.row_index_.push_back(e.col);
    a.row_values_.push_back(e.value);
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });
  a.col_ptr_.assign(cols + 1, 0);
  a.col_index_.reserve(entries.size());
  a.col_values_.reserve(entries.size());
  for (const Entry& e : entries) a.col_ptr_[e.col + 1]++;
  for (std::size_t j = 0; j < cols; ++j) a.col_ptr_[j + 1] += a.col_ptr_[j];
  for (const Entry& e : entries) {
    a.col_index_.push_back(e.row);
    a.col_values_.push_back(e.value);
  }
  return a;
}

std::vector<Entry> SparseMatrix::to_entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    auto cols = row_cols(i);
    auto vals = row_vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out.push_back(Entry{i, cols[k], vals[k]});
  }
  return out;
}

PackingProblem PackingProblem::normalize(const RawProblem& raw) {
  raw.validate();

  std::vector<Entry> scaled = raw.entries;
  double min_entry = std::numeric_limits<double>::infinity();
  for (Entry& e : scaled) {
    e.value /= raw.b[e.row];
    min_entry = std::min(min_entry, e.value);
  }
  const double c = std::min(1.0, min_entry);
  for (Entry& e : scaled) e.value /= c;

  PackingProblem p;
  p.n_ = raw.n;
  p.m_ = raw.m;
  p.alpha_ = raw.alpha;
  p.scale_c_ = c;
  p.weights_ = raw.weights;
  p.name_ = raw.name;
  p.matrix_ = SparseMatrix::from_entries(raw.m, raw.n, std::move(scaled));

  p.w_max_ = *std::max_element(p.weights_.begin(), p.weights_.end());
  p.w_min_ = *std::min_element(p.weights_.begin(), p.weights_.end());
  p.w_sum_ = 0.0;
  for (double w : p.weights_) p.w_sum_ += w;

  p.row_nnz_.resize(p.m_);
  p.max_row_sum_ = 0.0;
  for (std::size_t i = 0; i < p.m_; ++i) {
    p.row_nnz_[i] = p.matrix_.row_nnz(i);
    double s = 0.0;
    for (double v : p.matrix_.row_vals(i)) s += v;
    p.max_row_sum_ = std::max(p.max_row_sum_, s);
  }
  return p;
}

RawProblem PackingProblem::to_raw() const {
  RawProblem raw;
  raw.n = n_;
  raw.m = m_;
  raw.alpha = alpha_;
  raw.weights = weights_;
  raw.b.assign(m_, 1.0);
  raw.entries = matrix_.to_entries();
  raw.name = name_;
  return raw;
}

void PackingProblem::row_activity(std::span<const double> x,
                                  std::span<double> out) const {
  if (x.size() != n_)
    raise(ErrorCode::invalid_argument, "allocation length does not match n");
  for (std::size_t i = 0; i < m_; ++i) {
    auto cols = matrix_.row_cols(i);
    auto vals = matrix_.row_vals(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[cols[k]];
    out[i] = acc;
  }
}

std::vector<double> PackingProblem::row_activity(std::span<const double> x) const {
  std::vector<double> out(m_);
  row_activity(x, out);
  return out;
}

double PackingProblem::max_violation(std::span<const double> x) const {
  if (x.size() != n_)
    raise(ErrorCode::invalid_argument, "allocation length does not match n");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m_; ++i) {
    auto cols = matrix_.row_cols(i);
    auto vals = matrix_.row_vals(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) acc += vals[k] * x[cols[k]];
    worst = std::max(worst, acc - 1.0);
  }
  return worst;
}

double fair_utility(double x, double alpha) {
  if (alpha == 1.0) return std::log(x);
  return std::pow(x, 1.0 - alpha) / (1.0 - alpha);
}

double PackingProblem::objective(std::span<const double> x, double alpha) const {
  if (x.size() != n_)
    raise(ErrorCode::invalid_argument, "allocation length does not match n");
  double acc = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (x[j] < 0.0)
      raise(ErrorCode::invalid_argument,
            "negative allocation at index " + std::to_string(j));
    acc += weights_[j] * fair_utility(x[j], alpha);
  }
  return acc;
}

}  // namespace alphafair
