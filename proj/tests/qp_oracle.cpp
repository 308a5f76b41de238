#include "qp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sst::testing {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd nnls(const MatrixXd& a, const VectorXd& b, int max_iter) {
  const int m = static_cast<int>(a.cols());
  VectorXd x = VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) *
                     std::max(1.0, b.cwiseAbs().maxCoeff()) * m;

  auto solve_passive = [&](VectorXd& s) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    MatrixXd ap(a.rows(), idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) ap.col(c) = a.col(idx[c]);
    const VectorXd sp = ap.completeOrthogonalDecomposition().solve(b);
    s = VectorXd::Zero(m);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sp(c);
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    const VectorXd w = a.transpose() * (b - a * x);
    int t = -1;
    double best = tol;
    for (int j = 0; j < m; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) return x;
    passive[t] = true;

    VectorXd s;
    for (int inner = 0; inner < max_iter; ++inner) {
      solve_passive(s);
      double alpha = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (passive[j] && s(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (s - x);
      for (int j = 0; j < m; ++j) {
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
    x = s;
  }
  throw std::runtime_error("nnls: iteration cap reached");
}

bool ldp(const MatrixXd& g, const VectorXd& h, VectorXd& z) {
  const int p = static_cast<int>(g.cols());
  const int m = static_cast<int>(g.rows());
  MatrixXd e(p + 1, m);
  e.topRows(p) = g.transpose();
  e.row(p) = h.transpose();
  VectorXd f = VectorXd::Zero(p + 1);
  f(p) = 1.0;
  const VectorXd u = nnls(e, f);
  const VectorXd r = e * u - f;
  if (r.norm() < 1e-12) return false;
  z = -r.head(p) / r(p);
  return true;
}

namespace {

// Entry (a, b) of the matrix as an affine function of the upper-triangle
// variables: value = sign * x[var] + constant.
struct Affine {
  int var = -1;
  double sign = 0.0;
  double constant = 0.5;
};

}  // namespace

Matrix qp_project(const Matrix& y, const Ranking& pi, const std::vector<int>& labels,
                  const Matrix& weights) {
  const int n = static_cast<int>(y.rows());
  std::vector<std::vector<int>> var(n, std::vector<int>(n, -1));
  int p = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) var[a][b] = p++;
  }
  auto entry = [&](int a, int b) {
    if (a < b) return Affine{var[a][b], 1.0, 0.0};
    if (a > b) return Affine{var[b][a], -1.0, 1.0};
    return Affine{};
  };

  // Objective: sum over both cells of each pair. With x = m_ab (a < b):
  // w_ab (y_ab - x)^2 + w_ba (y_ba - 1 + x)^2 = c (x - t)^2 + const.
  VectorXd c(p), t(p);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double wab = weights.size() == 0 ? 1.0 : weights(a, b);
      const double wba = weights.size() == 0 ? 1.0 : weights(b, a);
      c(var[a][b]) = wab + wba;
      t(var[a][b]) = (wab * y(a, b) + wba * (1.0 - y(b, a))) / (wab + wba);
    }
  }

  // Constraint rows: coef . x >= rhs.
  std::vector<std::pair<VectorXd, double>> rows;
  auto add_difference = [&](int i, int j, int k, double direction) {
    // direction * (M_ik - M_jk) >= 0
    VectorXd coef = VectorXd::Zero(p);
    const Affine ei = entry(i, k), ej = entry(j, k);
    double constant = 0.0;
    if (ei.var >= 0) coef(ei.var) += direction * ei.sign;
    if (ej.var >= 0) coef(ej.var) -= direction * ej.sign;
    constant = direction * (ei.constant - ej.constant);
    if (coef.cwiseAbs().maxCoeff() > 0.0) rows.emplace_back(coef, -constant);
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (pi.rank(i) <= pi.rank(j)) continue;
      for (int k = 0; k < n; ++k) add_difference(i, j, k, 1.0);
    }
  }
  if (!labels.empty()) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (labels[i] != labels[j]) continue;
        for (int k = 0; k < n; ++k) {
          add_difference(i, j, k, 1.0);
          add_difference(i, j, k, -1.0);
        }
      }
    }
  }
  for (int v = 0; v < p; ++v) {
    VectorXd lo = VectorXd::Zero(p), hi = VectorXd::Zero(p);
    lo(v) = 1.0;
    hi(v) = -1.0;
    rows.emplace_back(lo, 0.0);
    rows.emplace_back(hi, -1.0);
  }

  // Substitute x = t + z / sqrt(c) to get a least-distance problem in z.
  const VectorXd scale = c.cwiseSqrt().cwiseInverse();
  MatrixXd g(rows.size(), p);
  VectorXd h(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    g.row(r) = rows[r].first.cwiseProduct(scale).transpose();
    h(r) = rows[r].second - rows[r].first.dot(t);
  }
  VectorXd z;
  if (!ldp(g, h, z)) throw std::runtime_error("qp_project: infeasible");
  const VectorXd x = t + z.cwiseProduct(scale);

  Matrix m(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Affine e = entry(a, b);
      m(a, b) = e.var >= 0 ? e.sign * x(e.var) + e.constant : e.constant;
    }
  }
  return m;
}

Matrix qp_lse(const Matrix& y, const std::vector<int>& labels) {
  const int n = static_cast<int>(y.rows());
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  Matrix best_m;
  do {
    const Matrix m = qp_project(y, Ranking::from_ranks(ranks), labels);
    const double obj = (y - m).squaredNorm();
    if (obj < best - 1e-9) {
      best = obj;
      best_m = m;
    }
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return best_m;
}

}  // namespace sst::testing
