#include "sst/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace sst {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEntryOutOfRange: return "EntryOutOfRange";
    case ErrorCode::kSkewViolation: return "SkewViolation";
    case ErrorCode::kBadDiagonal: return "BadDiagonal";
    case ErrorCode::kNotSST: return "NotSST";
    case ErrorCode::kNonTransitiveGrouping: return "NonTransitiveGrouping";
    case ErrorCode::kDegenerateScores: return "DegenerateScores";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kTooManyBlocks: return "TooManyBlocks";
    case ErrorCode::kUsageError: return "UsageError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string cell(int i, int j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain types

ComparisonMatrix ComparisonMatrix::all_half(int n) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "comparison matrix needs n >= 2");
  }
  return ComparisonMatrix(Matrix::Constant(n, n, 0.5));
}

ObservationMatrix ObservationMatrix::from_bits(BitMatrix bits) {
  if (bits.rows() != bits.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "observation matrix must be square");
  }
  const int n = static_cast<int>(bits.rows());
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "observation matrix needs n >= 2");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (bits(i, j) > 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "observation entry " + cell(i, j) + " is not a bit");
      }
      if (i != j && bits(i, j) + bits(j, i) != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "observation pair " + cell(i, j) + " is not complementary");
      }
    }
  }
  return ObservationMatrix(std::move(bits));
}

ObservationMatrix ObservationMatrix::from_real(const Matrix& values) {
  BitMatrix bits(values.rows(), values.cols());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "observation entry " + cell(static_cast<int>(i),
                                                static_cast<int>(j)) +
                        " is not 0 or 1");
      }
      bits(i, j) = static_cast<std::uint8_t>(v);
    }
  }
  return from_bits(std::move(bits));
}

Ranking Ranking::from_ranks(std::vector<int> ranks) {
  const int n = static_cast<int>(ranks.size());
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "empty ranking");
  std::vector<int> order(n, -1);
  for (int item = 0; item < n; ++item) {
    const int r = ranks[item];
    if (r < 1 || r > n || order[n - r] != -1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rank array is not a bijection onto [1, n]");
    }
    order[n - r] = item;
  }
  return Ranking(std::move(ranks), std::move(order));
}

Ranking Ranking::from_order(std::vector<int> best_first) {
  const int n = static_cast<int>(best_first.size());
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "empty ranking");
  std::vector<int> ranks(n, 0);
  for (int pos = 0; pos < n; ++pos) {
    const int item = best_first[pos];
    if (item < 0 || item >= n || ranks[item] != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "order is not a permutation of [0, n)");
    }
    ranks[item] = n - pos;
  }
  return Ranking(std::move(ranks), std::move(best_first));
}

Ranking Ranking::identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return from_order(std::move(order));
}

PartitionSpec PartitionSpec::from_sizes(std::vector<int> sizes) {
  if (sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "empty partition");
  std::vector<int> labels;
  for (int b = 0; b < static_cast<int>(sizes.size()); ++b) {
    if (sizes[b] < 1) {
      throw Error(ErrorCode::kInvalidArgument, "block sizes must be positive");
    }
    labels.insert(labels.end(), sizes[b], b);
  }
  return PartitionSpec(std::move(sizes), std::move(labels));
}

PartitionSpec PartitionSpec::with_labels(std::vector<int> sizes,
                                         std::vector<int> labels) {
  const int s = static_cast<int>(sizes.size());
  if (s == 0) throw Error(ErrorCode::kInvalidArgument, "empty partition");
  std::vector<int> counts(s, 0);
  for (int label : labels) {
    if (label < 0 || label >= s) {
      throw Error(ErrorCode::kInvalidArgument, "block label out of range");
    }
    ++counts[label];
  }
  for (int b = 0; b < s; ++b) {
    if (sizes[b] < 1 || counts[b] != sizes[b]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "labels do not match the declared block sizes");
    }
  }
  return PartitionSpec(std::move(sizes), std::move(labels));
}

PartitionSpec PartitionSpec::from_labels(std::vector<int> labels) {
  if (labels.empty()) throw Error(ErrorCode::kInvalidArgument, "empty partition");
  const int s = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> sizes(std::max(s, 0), 0);
  for (int label : labels) {
    if (label < 0) {
      throw Error(ErrorCode::kInvalidArgument, "block label out of range");
    }
    ++sizes[label];
  }
  return with_labels(std::move(sizes), std::move(labels));
}

int PartitionSpec::item_count() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

int PartitionSpec::kmax() const {
  return *std::max_element(sizes_.begin(), sizes_.end());
}

const std::vector<int>& PartitionSpec::labels() const {
  if (!labels_) {
    throw Error(ErrorCode::kInvalidArgument, "partition carries no labels");
  }
  return *labels_;
}

// ---------------------------------------------------------------------------
// Operations

ComparisonMatrix validate_comparison(const Matrix& raw, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::kInvalidArgument, "tol must be >= 0");
  if (raw.rows() != raw.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "comparison matrix must be square");
  }
  const int n = static_cast<int>(raw.rows());
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "comparison matrix needs n >= 2");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = raw(i, j);
      if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) {
        throw Error(ErrorCode::kEntryOutOfRange,
                    "entry " + cell(i, j) + " outside [0, 1]");
      }
    }
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    if (std::abs(raw(i, i) - 0.5) > tol) {
      throw Error(ErrorCode::kBadDiagonal,
                  "diagonal entry " + cell(i, i) + " differs from 1/2");
    }
    out(i, i) = 0.5;
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(raw(i, j) + raw(j, i) - 1.0) > tol) {
        throw Error(ErrorCode::kSkewViolation,
                    "pair " + cell(i, j) + " violates M(j,i) = 1 - M(i,j)");
      }
      // Exactly complementary pairs pass through untouched so that validating
      // an output again is a bitwise no-op.
      const double upper =
          raw(j, i) == 1.0 - raw(i, j)
              ? std::clamp(raw(i, j), 0.0, 1.0)
              : std::clamp(0.5 * (raw(i, j) + 1.0 - raw(j, i)), 0.0, 1.0);
      out(i, j) = upper;
      out(j, i) = 1.0 - upper;
    }
  }
  return ComparisonMatrix(std::move(out));
}

bool is_pi_sst(const ComparisonMatrix& m, const Ranking& pi, double tol) {
  const int n = m.size();
  if (pi.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "ranking size mismatch");
  }
  const auto& order = pi.order();
  // order is best first, so every earlier position must dominate every later
  // one in every column.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int i = order[a];
      const int j = order[b];
      for (int k = 0; k < n; ++k) {
        if (m(i, k) < m(j, k) - tol) return false;
      }
    }
  }
  return true;
}

namespace {

std::vector<int> order_by_row_sum(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  const Eigen::VectorXd sums = m.rowwise().sum();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sums[a] > sums[b]; });
  return order;
}

}  // namespace

Ranking find_sst_ranking(const ComparisonMatrix& m, double tol) {
  Ranking pi = Ranking::from_order(order_by_row_sum(m.values()));
  if (!is_pi_sst(m, pi, tol)) {
    throw Error(ErrorCode::kNotSST,
                "matrix is not SST under its row-sum ordering");
  }
  return pi;
}

PartitionSpec indifference_partition(const ComparisonMatrix& m, double tol) {
  const int n = m.size();
  auto indifferent = [&](int i, int j) {
    if (std::abs(m(i, j) - 0.5) > tol) return false;
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      if (std::abs(m(i, k) - m(j, k)) > tol) return false;
    }
    return true;
  };

  // Union-find over the tolerance relation, then check every component is a
  // clique of that relation.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool r = indifferent(i, j);
      rel[i][j] = rel[j][i] = r;
      if (r) parent[find(i)] = find(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (find(i) == find(j) && !rel[i][j]) {
        throw Error(ErrorCode::kNonTransitiveGrouping,
                    "items " + std::to_string(i) + " and " + std::to_string(j) +
                        " are linked but not indifferent; tolerance too large");
      }
    }
  }

  const Eigen::VectorXd sums = m.values().rowwise().sum();
  std::vector<int> roots;
  std::vector<int> root_of(n);
  for (int i = 0; i < n; ++i) {
    root_of[i] = find(i);
    if (std::find(roots.begin(), roots.end(), root_of[i]) == roots.end()) {
      roots.push_back(root_of[i]);
    }
  }
  struct Group {
    int root;
    int first;
    int count = 0;
    double mean = 0.0;
  };
  std::vector<Group> groups;
  for (int r : roots) groups.push_back({r, n, 0, 0.0});
  for (int i = 0; i < n; ++i) {
    auto& g = *std::find_if(groups.begin(), groups.end(),
                            [&](const Group& g) { return g.root == root_of[i]; });
    g.first = std::min(g.first, i);
    ++g.count;
    g.mean += sums[i];
  }
  for (auto& g : groups) g.mean /= g.count;
  std::stable_sort(groups.begin(), groups.end(),
                   [](const Group& a, const Group& b) {
                     if (a.mean != b.mean) return a.mean > b.mean;
                     return a.first < b.first;
                   });

  std::vector<int> sizes;
  std::vector<int> labels(n);
  for (int b = 0; b < static_cast<int>(groups.size()); ++b) {
    sizes.push_back(groups[b].count);
    for (int i = 0; i < n; ++i) {
      if (root_of[i] == groups[b].root) labels[i] = b;
    }
  }
  return PartitionSpec::with_labels(std::move(sizes), std::move(labels));
}

int kmax(const ComparisonMatrix& m, double tol) {
  return indifference_partition(m, tol).kmax();
}

double squared_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "shape mismatch");
  }
  return (a - b).squaredNorm();
}

double squared_distance(const ComparisonMatrix& a, const ComparisonMatrix& b) {
  return squared_distance(a.values(), b.values());
}

}  // namespace sst
