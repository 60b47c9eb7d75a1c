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

#include "alphafair/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "alphafair/errors.hpp"
#include "alphafair/log.hpp"

namespace alphafair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd dense_matrix(const PackingProblem& p) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(p.num_constraints()),
      static_cast<Eigen::Index>(p.num_vars()));
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    auto cols = p.matrix().row_cols(i);
    auto vals = p.matrix().row_vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k])) = vals[k];
  }
  return a;
}

double barrier_merit(const Eigen::VectorXd& x, const Eigen::VectorXd& slack,
                     const std::vector<double>& w, double alpha, double mu) {
  double val = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    val += w[static_cast<std::size_t>(j)] *
               (alpha == 1.0 ? std::log(x[j])
                             : std::pow(x[j], 1.0 - alpha) / (1.0 - alpha)) +
           mu * std::log(x[j]);
  for (Eigen::Index i = 0; i < slack.size(); ++i) val += mu * std::log(slack[i]);
  return val;
}

}  // namespace

OracleSolution barrier_solve(const PackingProblem& p, double alpha, double tol) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_constraints();
  if (n > 200 || m > 200)
    raise(ErrorCode::scale_limit, "barrier oracle is desk scale only (n, m <= 200)");
  if (!(tol >= 1e-10))
    raise(ErrorCode::invalid_argument, "barrier tolerance must be >= 1e-10");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    raise(ErrorCode::invalid_argument, "alpha must be a positive finite real");

  const Eigen::MatrixXd a = dense_matrix(p);
  const auto& w = p.weights();
  const Eigen::Index en = static_cast<Eigen::Index>(n);
  const Eigen::Index em = static_cast<Eigen::Index>(m);

  // Compensated slack 1 - sum_j A_ij x_j. Near the boundary the plain
  // subtraction loses every significant digit of the slack, which is exactly
  // what the duals mu/slack are made of.
  auto slacks = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    for (Eigen::Index i = 0; i < em; ++i) {
      double sum = 1.0, comp = 0.0;
      for (Eigen::Index j = 0; j < en; ++j) {
        const double aij = a(i, j);
        if (aij == 0.0) continue;
        const double prod = -aij * x[j];
        const double err = std::fma(-aij, x[j], -prod);
        const double t = sum + prod;
        comp += std::abs(sum) >= std::abs(prod) ? (sum - t) + prod
                                                : (prod - t) + sum;
        comp += err;
        sum = t;
      }
      out[i] = sum + comp;
    }
  };

  struct Eval {
    Eigen::VectorXd slack, grad;
    double resid = 0.0;  // max_j |1 - xi_j| with duals mu/slack
    bool interior = false;
  };
  auto evaluate = [&](const Eigen::VectorXd& x, double mu, Eval& e) {
    e.slack.resize(em);
    slacks(x, e.slack);
    e.interior = x.minCoeff() > 0.0 && e.slack.minCoeff() > 0.0;
    if (!e.interior) return;
    e.grad.resize(en);
    e.resid = 0.0;
    const Eigen::VectorXd inv_slack = e.slack.cwiseInverse();
    for (Eigen::Index j = 0; j < en; ++j) {
      const double price = a.col(j).dot(inv_slack) * mu;
      const double wj = w[static_cast<std::size_t>(j)];
      // The mu/x term keeps tiny-alpha "loser" coordinates at mu scale
      // instead of chasing an unrepresentable interior optimum.
      e.grad[j] = wj * std::pow(x[j], -alpha) - price + mu / x[j];
      e.resid = std::max(e.resid,
                         std::abs(e.grad[j]) * std::pow(x[j], alpha) / wj);
    }
  };

  // Quantization floor: one ulp of x moves each slack by about
  // eps * row_sum, so duals mu/slack stop being resolvable once the slack
  // approaches that scale.
  auto noise_of = [&](const Eigen::VectorXd& slack) {
    return 2.3e-16 * p.max_entry() / slack.minCoeff();
  };

  // Strictly interior start: half the budget of the fullest row.
  Eigen::VectorXd x = Eigen::VectorXd::Constant(en, 0.5 / p.max_row_sum());
  double mu = 1.0;
  double mu_good = -1.0;
  Eigen::VectorXd x_good = x;
  bool any_fail = false;

  for (;;) {
    Eval cur;
    evaluate(x, mu, cur);
    if (!cur.interior) {
      any_fail = true;
      break;
    }
    if (noise_of(cur.slack) > std::max(0.5 * mu, 1e-3)) break;  // below x resolution

    bool inner_ok = false;
    for (int it = 0; it < 500; ++it) {
      const double target = std::max(0.5 * mu, 1e-13);
      if (cur.resid <= target) {
        inner_ok = true;
        break;
      }
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(en, en);
      for (Eigen::Index j = 0; j < en; ++j)
        h(j, j) = alpha * w[static_cast<std::size_t>(j)] *
                      std::pow(x[j], -alpha - 1.0) +
                  mu / (x[j] * x[j]);
      const Eigen::VectorXd sw = cur.slack.cwiseInverse().array().square() * mu;
      h.noalias() += a.transpose() * sw.asDiagonal() * a;
      const Eigen::VectorXd d = h.ldlt().solve(cur.grad);

      double t = 1.0;
      for (Eigen::Index j = 0; j < en; ++j)
        if (d[j] < 0.0) t = std::min(t, -0.995 * x[j] / d[j]);
      const Eigen::VectorXd ad = a * d;
      for (Eigen::Index i = 0; i < em; ++i)
        if (ad[i] > 0.0) t = std::min(t, 0.995 * cur.slack[i] / ad[i]);

      const double f0 = barrier_merit(x, cur.slack, w, alpha, mu);
      const double slope = cur.grad.dot(d);
      bool stepped = false;
      Eval trial;
      while (t > 1e-14) {
        const Eigen::VectorXd xt = x + t * d;
        evaluate(xt, mu, trial);
        if (trial.interior &&
            (barrier_merit(xt, trial.slack, w, alpha, mu) >=
                 f0 + 1e-4 * t * slope ||
             trial.resid < 0.9 * cur.resid)) {
          x = xt;
          cur = trial;
          stepped = true;
          break;
        }
        t *= 0.5;
      }
      if (!stepped) break;  // merit and residual both stalled at this mu
    }
    evaluate(x, mu, cur);
    if (!inner_ok && cur.resid > 1e-3) {
      any_fail = true;
      break;
    }
    mu_good = mu;
    x_good = x;
    // A stall above target but below 1e-3 means the x grid cannot express a
    // better center at this mu; descending further only degrades the duals.
    if (!inner_ok) break;
    if (mu <= tol) break;
    mu = std::max(mu / 10.0, tol);
  }

  const bool converged = !any_fail && mu_good > 0.0;
  if (mu_good > 0.0) {
    mu = mu_good;
    x = x_good;
  }

  OracleSolution sol;
  sol.method = "barrier";
  sol.converged = converged;
  Eigen::VectorXd slack(em);
  slacks(x, slack);
  sol.x.assign(x.data(), x.data() + en);
  sol.y.resize(m);
  for (Eigen::Index i = 0; i < em; ++i)
    sol.y[static_cast<std::size_t>(i)] = mu / slack[i];
  sol.objective = p.objective(sol.x, alpha);

  double r_feas = 0.0;
  for (Eigen::Index i = 0; i < em; ++i) r_feas = std::max(r_feas, -slack[i]);
  double r_slackness = 0.0, r_gradient = 0.0;
  for (Eigen::Index i = 0; i < em; ++i)
    r_slackness = std::max(r_slackness,
                           std::abs(sol.y[static_cast<std::size_t>(i)] * slack[i]));
  for (Eigen::Index j = 0; j < en; ++j) {
    double price = 0.0;
    for (Eigen::Index i = 0; i < em; ++i)
      price += sol.y[static_cast<std::size_t>(i)] * a(i, j);
    const double xi = std::pow(x[j], alpha) * price / w[static_cast<std::size_t>(j)];
    r_gradient = std::max(r_gradient, std::abs(xi - 1.0));
  }
  sol.kkt_residual = std::max({r_feas, r_slackness, r_gradient});
  if (log_enabled(LogLevel::debug) || !converged)
    log_msg(!converged ? LogLevel::info : LogLevel::debug,
            "barrier: alpha=" + std::to_string(alpha) + " final mu=" +
                std::to_string(mu) + " converged=" + (converged ? "yes" : "no") +
                " kkt=" + std::to_string(sol.kkt_residual));
  return sol;
}

std::vector<double> single_constraint_closed_form(std::span<const double> weights,
                                                  std::span<const double> row,
                                                  double alpha) {
  const std::size_t n = weights.size();
  if (row.size() != n || n == 0)
    raise(ErrorCode::invalid_argument, "weights and row must have equal positive length");
  for (std::size_t j = 0; j < n; ++j)
    if (!(weights[j] > 0.0) || !(row[j] > 0.0))
      raise(ErrorCode::invalid_argument, "weights and row entries must be positive");

  // g(y) = sum_j A_j (w_j/(y A_j))^{1/alpha} is strictly decreasing; bracket
  // the tight dual and bisect to 1e-12 relative.
  auto activity_at = [&](double y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += row[j] * std::pow(weights[j] / (y * row[j]), 1.0 / alpha);
    return acc;
  };
  double lo = 1.0, hi = 1.0;
  while (activity_at(lo) < 1.0) lo *= 0.5;
  while (activity_at(hi) > 1.0) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (activity_at(mid) > 1.0 ? lo : hi) = mid;
  }
  const double y = 0.5 * (lo + hi);

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j)
    x[j] = std::pow(weights[j] / (y * row[j]), 1.0 / alpha);
  return x;
}

std::vector<double> max_min_fair(const PackingProblem& p) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_constraints();
  std::vector<double> z(n, 0.0);
  std::vector<std::uint8_t> frozen(n, 0);
  std::size_t remaining = n;
  double level = 0.0;

  while (remaining > 0) {
    // Smallest common level at which some constraint becomes tight.
    double t_star = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      auto cols = p.matrix().row_cols(i);
      auto vals = p.matrix().row_vals(i);
      double fixed = 0.0, open_coef = 0.0;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (frozen[cols[k]])
          fixed += vals[k] * z[cols[k]];
        else
          open_coef += vals[k];
      }
      if (open_coef > 0.0)
        t_star = std::min(t_star, (1.0 - fixed) / open_coef);
    }
    if (!std::isfinite(t_star))
      raise(ErrorCode::internal, "progressive filling found no binding constraint");
    level = std::max(level, t_star);

    // Freeze every unfrozen variable of each newly tight constraint.
    bool froze = false;
    for (std::size_t i = 0; i < m; ++i) {
      auto cols = p.matrix().row_cols(i);
      auto vals = p.matrix().row_vals(i);
      double fixed = 0.0, open_coef = 0.0;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (frozen[cols[k]])
          fixed += vals[k] * z[cols[k]];
        else
          open_coef += vals[k];
      }
      if (open_coef <= 0.0) continue;
      const double t_i = (1.0 - fixed) / open_coef;
      if (t_i <= level * (1.0 + 1e-12) + 1e-15) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
          const std::size_t j = cols[k];
          if (!frozen[j]) {
            z[j] = level;
            frozen[j] = 1;
            froze = true;
            remaining--;
          }
        }
      }
    }
    if (!froze)
      raise(ErrorCode::internal, "progressive filling stalled");
  }
  return z;
}

LpSolution lp_solve(const PackingProblem& p, std::span<const double> weights) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_constraints();
  if (n > 12 || m > 12)
    raise(ErrorCode::scale_limit, "lp oracle enumerates vertices; n, m <= 12 only");
  if (weights.size() != n)
    raise(ErrorCode::invalid_argument, "weights length does not match n");

  const Eigen::MatrixXd a = dense_matrix(p);
  const Eigen::Index en = static_cast<Eigen::Index>(n);

  LpSolution best;
  best.x.assign(n, 0.0);
  best.value = 0.0;  // the origin is always a basic feasible point

  // Active sets are n-subsets of the m row constraints plus n bounds z_j >= 0.
  const std::size_t total = m + n;
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  const double tol = 1e-9;

  for (;;) {
    Eigen::MatrixXd basis(en, en);
    Eigen::VectorXd rhs(en);
    for (std::size_t r = 0; r < n; ++r) {
      if (pick[r] < m) {
        basis.row(static_cast<Eigen::Index>(r)) = a.row(static_cast<Eigen::Index>(pick[r]));
        rhs[static_cast<Eigen::Index>(r)] = 1.0;
      } else {
        basis.row(static_cast<Eigen::Index>(r)).setZero();
        basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(pick[r] - m)) = 1.0;
        rhs[static_cast<Eigen::Index>(r)] = 0.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (lu.isInvertible()) {
      const Eigen::VectorXd z = lu.solve(rhs);
      bool ok = z.minCoeff() >= -tol;
      if (ok) {
        const Eigen::VectorXd act = a * z;
        for (Eigen::Index i = 0; i < act.size() && ok; ++i)
          if (act[i] > 1.0 + tol) ok = false;
      }
      if (ok) {
        double value = 0.0;
        for (Eigen::Index j = 0; j < en; ++j)
          value += weights[static_cast<std::size_t>(j)] * std::max(z[j], 0.0);
        if (value > best.value) {
          best.value = value;
          for (Eigen::Index j = 0; j < en; ++j)
            best.x[static_cast<std::size_t>(j)] = std::max(z[j], 0.0);
        }
      }
    }

    // Next combination in lexicographic order.
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (pick[k] != k + total - n) break;
      if (k == 0) return best;
    }
    if (pick[k] == k + total - n) return best;
    ++pick[k];
    for (std::size_t r = k + 1; r < n; ++r) pick[r] = pick[r - 1] + 1;
  }
}

}  // namespace alphafair
