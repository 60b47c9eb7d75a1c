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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace alphafair {

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Packing problem as given: maximize sum_j w_j f_alpha(x_j) subject to
/// A x <= b, x >= 0, with all stored A_ij > 0, b > 0, w > 0.
struct RawProblem {
  std::size_t n = 0;
  std::size_t m = 0;
  double alpha = 1.0;
  std::vector<double> weights;
  std::vector<double> b;
  std::vector<Entry> entries;
  std::string name;

  // Throws Error(invalid_problem) on any structural defect: size mismatch,
  // nonpositive weight / rhs / entry, out-of-range or duplicate index, or a
  // variable that appears in no constraint.
  void validate() const;

  friend bool operator==(const RawProblem&, const RawProblem&) = default;
};

/// Sparse nonnegative matrix stored compressed-by-row and compressed-by-column,
/// both with ascending inner indices so that every accumulation has one fixed
/// summation order.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  static SparseMatrix from_entries(std::size_t rows, std::size_t cols,
                                   std::vector<Entry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return row_values_.size(); }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {row_index_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_vals(std::size_t i) const {
    return {row_values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const std::size_t> col_rows(std::size_t j) const {
    return {col_index_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }
  std::span<const double> col_vals(std::size_t j) const {
    return {col_values_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  std::size_t row_nnz(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::size_t col_nnz(std::size_t j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  double max_value() const { return max_value_; }

  std::vector<Entry> to_entries() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_, row_index_;
  std::vector<double> row_values_;
  std::vector<std::size_t> col_ptr_, col_index_;
  std::vector<double> col_values_;
  double max_value_ = 0.0;
};

/// Problem in normalized form: A x <= 1 with every stored entry >= 1.
/// Immutable after construction; shareable across threads.
class PackingProblem {
 public:
  /// Two-step scaling: divide row i by b_i, then rescale variables by
  /// c = min{1, min over stored entries of A_ij/b_i} so all entries end
  /// up >= 1. Normalized and raw coordinates relate by x_hat = c * x_raw.
  static PackingProblem normalize(const RawProblem& raw);

  std::size_t num_vars() const { return n_; }
  std::size_t num_constraints() const { return m_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_c_; }
  const std::string& name() const { return name_; }

  const std::vector<double>& weights() const { return weights_; }
  const SparseMatrix& matrix() const { return matrix_; }

  double max_entry() const { return matrix_.max_value(); }  // A_max
  double weight_max() const { return w_max_; }
  double weight_min() const { return w_min_; }
  double weight_sum() const { return w_sum_; }               // W
  double weight_ratio() const { return w_max_ / w_min_; }    // R_w
  const std::vector<std::size_t>& row_nonzeros() const { return row_nnz_; }
  double max_row_sum() const { return max_row_sum_; }

  /// Normalized problem re-expressed as a RawProblem with b = 1.
  RawProblem to_raw() const;

  void row_activity(std::span<const double> x, std::span<double> out) const;
  std::vector<double> row_activity(std::span<const double> x) const;

  /// max_i (sum_j A_ij x_j - 1); <= 0 iff x is feasible.
  double max_violation(std::span<const double> x) const;

  /// p_alpha(x) at the given alpha (>= 1 with some x_j = 0 yields -inf;
  /// negative x_j is rejected).
  double objective(std::span<const double> x, double alpha) const;
  double objective(std::span<const double> x) const { return objective(x, alpha_); }

 private:
  std::size_t n_ = 0, m_ = 0;
  double alpha_ = 1.0;
  double scale_c_ = 1.0;
  std::vector<double> weights_;
  SparseMatrix matrix_;
  double w_max_ = 0.0, w_min_ = 0.0, w_sum_ = 0.0;
  double max_row_sum_ = 0.0;
  std::vector<std::size_t> row_nnz_;
  std::string name_;
};

/// Single-term alpha-fair utility: ln(x) at alpha = 1, x^(1-alpha)/(1-alpha)
/// otherwise. Branch selection is an exact comparison; callers decide the
/// effective alpha.
double fair_utility(double x, double alpha);

}  // namespace alphafair
