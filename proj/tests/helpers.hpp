#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "sst/random.hpp"
#include "sst/types.hpp"

namespace sst::testing {

inline Ranking random_ranking(int n, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  return Ranking::from_order(order);
}

// Skew binary observation whose upper triangle is the bits of `code`
// (row-major), zero diagonal.
inline Matrix binary_from_code(int n, std::uint64_t code) {
  Matrix y = Matrix::Zero(n, n);
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      y(i, j) = double((code >> bit++) & 1U);
      y(j, i) = 1.0 - y(i, j);
    }
  }
  return y;
}

inline Matrix random_binary(int n, Rng& rng) {
  Matrix y = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    y(i, i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    for (int j = i + 1; j < n; ++j) {
      y(i, j) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      y(j, i) = 1.0 - y(i, j);
    }
  }
  return y;
}

// Unconstrained real matrix with entries in [lo, hi).
inline Matrix random_real(int n, Rng& rng, double lo = -0.5, double hi = 1.5) {
  Matrix y(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) y(i, j) = lo + (hi - lo) * rng.uniform();
  }
  return y;
}

// Y(i, j) = 1 iff i < j, zero diagonal.
inline Matrix total_order(int n) {
  Matrix y = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) y(i, j) = 1.0;
  }
  return y;
}

// Columns non-increasing and rows non-decreasing once items are listed best
// first; checked on the permuted matrix rather than through triples.
inline bool bi_isotone_under(const Matrix& m, const Ranking& pi, double tol) {
  const auto& o = pi.order();
  const int n = static_cast<int>(o.size());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q + 1 < n; ++q) {
      if (m(o[p], o[q]) > m(o[p], o[q + 1]) + tol) return false;
      if (m(o[q + 1], o[p]) > m(o[q], o[p]) + tol) return false;
    }
  }
  return true;
}

}  // namespace sst::testing
