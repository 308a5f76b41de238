#include "sst/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sst/core.hpp"

namespace sst {

namespace {

// Scratch space for in-place PAVA so the Dykstra sweeps do not allocate.
struct PavaWorkspace {
  std::vector<double> mean;
  std::vector<double> weight;
  std::vector<int> length;

  explicit PavaWorkspace(std::size_t n) : mean(n), weight(n), length(n) {}
};

// Projects v[0], v[stride], ..., v[(count-1)*stride] onto non-decreasing
// sequences under weights w (same stride). Negative strides are allowed.
void pava_strided(double* v, const double* w, int count, int stride,
                  PavaWorkspace& ws) {
  int top = -1;
  for (int t = 0; t < count; ++t) {
    ++top;
    ws.mean[top] = v[t * stride];
    ws.weight[top] = w[t * stride];
    ws.length[top] = 1;
    while (top > 0 && ws.mean[top - 1] > ws.mean[top]) {
      const double wsum = ws.weight[top - 1] + ws.weight[top];
      ws.mean[top - 1] = (ws.weight[top - 1] * ws.mean[top - 1] +
                          ws.weight[top] * ws.mean[top]) /
                         wsum;
      ws.weight[top - 1] = wsum;
      ws.length[top - 1] += ws.length[top];
      --top;
    }
  }
  int t = 0;
  for (int b = 0; b <= top; ++b) {
    for (int r = 0; r < ws.length[b]; ++r, ++t) v[t * stride] = ws.mean[b];
  }
}

void pava_strided_decreasing(double* v, const double* w, int count, int stride,
                             PavaWorkspace& ws) {
  pava_strided(v + (count - 1) * stride, w + (count - 1) * stride, count,
               -stride, ws);
}

// A matrix in C(pi) is determined by its strict upper triangle in rank
// positions (u[p][q], p < q, item order[p] against the worse item order[q]).
// Those entries must be non-decreasing along each row, non-increasing down
// each column and lie in [1/2, 1]. The box is not a Dykstra set: clipping
// the unconstrained isotonic fit to [1/2, 1] gives the bounded fit exactly.
//
// Storage is a dense n x n row-major array; only p < q is touched.
class TriangleDykstra {
 public:
  TriangleDykstra(int n, std::vector<double> target, std::vector<double> weight)
      : n_(n),
        target_(std::move(target)),
        w_(std::move(weight)),
        ws_(static_cast<std::size_t>(n)) {}

  struct Outcome {
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
  };

  Outcome run(const ProjectionSettings& settings) {
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    std::vector<double> x = target_;
    std::vector<double> prev(nn, 0.0);
    std::vector<double> inc_cols(nn, 0.0);
    std::vector<double> inc_rows(nn, 0.0);

    Outcome out;
    for (int sweep = 1; sweep <= settings.max_iter; ++sweep) {
      double change = 0.0;
      for (int p = 0; p < n_; ++p) {
        for (int q = p + 1; q < n_; ++q) prev[p * n_ + q] = x[p * n_ + q];
      }

      // Column q holds rows 0..q-1 and must be non-increasing.
      for (int p = 0; p < n_; ++p) {
        for (int q = p + 1; q < n_; ++q) x[p * n_ + q] += inc_cols[p * n_ + q];
      }
      for (int p = 0; p < n_; ++p) {
        for (int q = p + 1; q < n_; ++q) inc_cols[p * n_ + q] = x[p * n_ + q];
      }
      for (int q = 1; q < n_; ++q) {
        pava_strided_decreasing(&x[q], &w_[q], q, n_, ws_);
      }
      for (int p = 0; p < n_; ++p) {
        for (int q = p + 1; q < n_; ++q) inc_cols[p * n_ + q] -= x[p * n_ + q];
      }

      // Row p holds columns p+1..n-1 and must be non-decreasing.
      for (int p = 0; p + 1 < n_; ++p) {
        double* row = &x[p * n_ + p + 1];
        double* inc = &inc_rows[p * n_ + p + 1];
        const int len = n_ - p - 1;
        for (int t = 0; t < len; ++t) {
          row[t] += inc[t];
          inc[t] = row[t];
        }
        pava_strided(row, &w_[p * n_ + p + 1], len, 1, ws_);
        for (int t = 0; t < len; ++t) inc[t] -= row[t];
      }

      for (int p = 0; p < n_; ++p) {
        for (int q = p + 1; q < n_; ++q) {
          const double d = x[p * n_ + q] - prev[p * n_ + q];
          change += d * d;
        }
      }
      out.iterations = sweep;
      if (std::sqrt(change) <= settings.tol &&
          column_violation(x) <= settings.feasibility_tol) {
        out.converged = true;
        break;
      }
    }
    out.x = std::move(x);
    return out;
  }

 private:
  // Rows are exactly monotone after each sweep; only columns can lag.
  double column_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int q = 1; q < n_; ++q) {
      for (int p = 0; p + 1 < q; ++p) {
        worst = std::max(worst, x[(p + 1) * n_ + q] - x[p * n_ + q]);
      }
    }
    return worst;
  }

  int n_;
  std::vector<double> target_;
  std::vector<double> w_;
  PavaWorkspace ws_;
};

void check_settings(const ProjectionSettings& settings) {
  if (!(settings.tol > 0.0) || settings.max_iter < 1 ||
      !(settings.feasibility_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid projection settings");
  }
}

void check_input(const Matrix& y, const Ranking& pi) {
  if (y.rows() != y.cols() || y.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "projection input must be square with n >= 2");
  }
  if (pi.size() != y.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "ranking size mismatch");
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "projection input is not finite");
  }
}

struct ReducedSolution {
  Matrix upper;  // rank positions; entries p < q are the estimate
  int iterations = 0;
  bool converged = false;
};

// Solves the problem on s positions given a position-ordered matrix and
// symmetric positive weights. The skew-symmetric part of the target is
// (y_pq + 1 - y_qp) / 2 for both cells of a pair.
ReducedSolution solve_positions(const Matrix& y, const Matrix& w,
                                const ProjectionSettings& settings) {
  const int s = static_cast<int>(y.rows());
  std::vector<double> target(static_cast<std::size_t>(s) * s, 0.0);
  std::vector<double> weight(static_cast<std::size_t>(s) * s, 1.0);
  for (int p = 0; p < s; ++p) {
    for (int q = p + 1; q < s; ++q) {
      target[p * s + q] = 0.5 * (y(p, q) + 1.0 - y(q, p));
      weight[p * s + q] = w(p, q);
    }
  }
  TriangleDykstra solver(s, std::move(target), std::move(weight));
  auto outcome = solver.run(settings);

  ReducedSolution out;
  out.upper = Matrix::Constant(s, s, 0.5);
  for (int p = 0; p < s; ++p) {
    for (int q = p + 1; q < s; ++q) {
      out.upper(p, q) = std::clamp(outcome.x[p * s + q], 0.5, 1.0);
    }
  }
  out.iterations = outcome.iterations;
  out.converged = outcome.converged;
  return out;
}

// Expands a position-level upper triangle to an item-level comparison matrix.
// position_of_item maps an item to its (block) position.
Matrix expand(const Matrix& upper, const std::vector<int>& position_of_item) {
  const int n = static_cast<int>(position_of_item.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = position_of_item[i];
      const int b = position_of_item[j];
      if (a == b) {
        m(i, j) = 0.5;
      } else if (a < b) {
        m(i, j) = upper(a, b);
      } else {
        m(i, j) = 1.0 - upper(b, a);
      }
    }
  }
  return m;
}

EstimateReport finish(const Matrix& y, const Matrix& weights, const Ranking& pi,
                      const ReducedSolution& sol,
                      const std::vector<int>& position_of_item) {
  EstimateReport report;
  report.estimate = validate_comparison(expand(sol.upper, position_of_item), 1e-8);
  report.ranking_used = pi;
  report.objective =
      (weights.array() * (y - report.estimate.values()).array().square()).sum();
  report.iterations = sol.iterations;
  report.converged = sol.converged;
  report.feasibility_residual = feasibility_violation(report.estimate.values(), pi);
  if (!report.converged) throw ProjectionNotConverged(std::move(report));
  return report;
}

}  // namespace

ProjectionNotConverged::ProjectionNotConverged(EstimateReport report)
    : Error(ErrorCode::kNotConverged,
            "projection did not converge after " +
                std::to_string(report.iterations) + " sweeps (residual " +
                std::to_string(report.feasibility_residual) + ")"),
      report_(std::move(report)) {}

std::vector<double> pava(std::span<const double> values,
                         std::span<const double> weights, Monotone direction) {
  if (values.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pava: length mismatch");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "pava: weights must be > 0");
    }
  }
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  const int count = static_cast<int>(out.size());
  PavaWorkspace ws(out.size());
  if (direction == Monotone::kNondecreasing) {
    pava_strided(out.data(), weights.data(), count, 1, ws);
  } else {
    pava_strided_decreasing(out.data(), weights.data(), count, 1, ws);
  }
  return out;
}

EstimateReport project_onto_class(const Matrix& y, const Ranking& pi,
                                  const std::optional<BlockConstraint>& blocks,
                                  const ProjectionSettings& settings) {
  check_settings(settings);
  check_input(y, pi);
  const int n = static_cast<int>(y.rows());
  const auto& order = pi.order();

  std::vector<int> position_of_item(n);
  std::vector<int> block_size;
  if (!blocks) {
    for (int p = 0; p < n; ++p) position_of_item[order[p]] = p;
    block_size.assign(n, 1);
  } else {
    if (static_cast<int>(blocks->labels.size()) != n) {
      throw Error(ErrorCode::kInvalidArgument, "block labels size mismatch");
    }
    // Blocks become positions in order of first appearance under pi.
    std::vector<int> relabel(n, -1);
    int last = -1;
    for (int item : order) {
      const int label = blocks->labels[item];
      if (label < 0 || label >= n) {
        throw Error(ErrorCode::kInvalidArgument, "block label out of range");
      }
      if (label != last) {
        if (relabel[label] != -1) {
          throw Error(ErrorCode::kInvalidArgument,
                      "blocks are not contiguous under the ranking");
        }
        relabel[label] = static_cast<int>(block_size.size());
        block_size.push_back(0);
        last = label;
      }
      position_of_item[item] = relabel[label];
      ++block_size[relabel[label]];
    }
  }

  // Block-constant matrices only see block means of y, with weight equal to
  // the number of cells in each block pair.
  const int s = static_cast<int>(block_size.size());
  Matrix sums = Matrix::Zero(s, s);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sums(position_of_item[i], position_of_item[j]) += y(i, j);
  }
  Matrix weights(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) weights(a, b) = double(block_size[a]) * block_size[b];
  }
  const Matrix means = sums.cwiseQuotient(weights);
  const ReducedSolution sol = solve_positions(means, weights, settings);
  return finish(y, Matrix::Ones(n, n), pi, sol, position_of_item);
}

EstimateReport project_onto_class_weighted(const Matrix& y,
                                           const Matrix& weights,
                                           const Ranking& pi,
                                           const ProjectionSettings& settings) {
  check_settings(settings);
  check_input(y, pi);
  if (weights.rows() != y.rows() || weights.cols() != y.cols() ||
      !(weights.array() > 0.0).all() || weights != weights.transpose()) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights must be positive, symmetric and match the input");
  }
  const auto& order = pi.order();
  const int n = static_cast<int>(order.size());
  Matrix yp(n, n);
  Matrix wp(n, n);
  std::vector<int> position_of_item(n);
  for (int p = 0; p < n; ++p) {
    position_of_item[order[p]] = p;
    for (int q = 0; q < n; ++q) {
      yp(p, q) = y(order[p], order[q]);
      wp(p, q) = weights(order[p], order[q]);
    }
  }
  const ReducedSolution sol = solve_positions(yp, wp, settings);
  return finish(y, weights, pi, sol, position_of_item);
}

double objective(const Matrix& y, const Matrix& m) {
  return squared_distance(y, m);
}

double feasibility_violation(const Matrix& m, const Ranking& pi) {
  const auto& order = pi.order();
  const int n = static_cast<int>(order.size());
  double worst = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double v = m(order[p], order[q]);
      worst = std::max({worst, -v, v - 1.0});
      if (q + 1 < n) worst = std::max(worst, v - m(order[p], order[q + 1]));
      if (p + 1 < n) worst = std::max(worst, m(order[p + 1], order[q]) - v);
      if (p == q) {
        worst = std::max(worst, std::abs(v - 0.5));
      } else {
        worst = std::max(worst, std::abs(v + m(order[q], order[p]) - 1.0));
      }
    }
  }
  return worst;
}

}  // namespace sst
