#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sst {

using Matrix = Eigen::MatrixXd;
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

class ComparisonMatrix;
ComparisonMatrix validate_comparison(const Matrix& raw, double tol);

// Pairwise preference probabilities: entry (i, j) is the probability that
// item i beats item j. Entries lie in [0, 1], M(j, i) = 1 - M(i, j) and the
// diagonal is exactly 1/2. Only obtainable through validate_comparison() or
// the all-half factory, so every instance satisfies the invariants.
class ComparisonMatrix {
 public:
  static ComparisonMatrix all_half(int n);

  int size() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

 private:
  explicit ComparisonMatrix(Matrix values) : values_(std::move(values)) {}
  friend ComparisonMatrix validate_comparison(const Matrix& raw, double tol);

  Matrix values_;
};

// One Bernoulli outcome per pair. Off-diagonal entries are complementary;
// diagonal entries are independent fair coins and carry no information.
class ObservationMatrix {
 public:
  // Throws Error(kInvalidArgument) on non-binary entries, non-square input,
  // n < 2, or a complementarity violation off the diagonal.
  static ObservationMatrix from_bits(BitMatrix bits);
  static ObservationMatrix from_real(const Matrix& values);

  int size() const { return static_cast<int>(bits_.rows()); }
  int operator()(int i, int j) const { return bits_(i, j); }
  const BitMatrix& bits() const { return bits_; }
  Matrix to_real() const { return bits_.cast<double>(); }

 private:
  explicit ObservationMatrix(BitMatrix bits) : bits_(std::move(bits)) {}
  BitMatrix bits_;
};

// Total order on items. rank(i) is in [1, n] and larger means more preferred,
// so the best item carries rank n. order() lists items best first.
class Ranking {
 public:
  static Ranking from_ranks(std::vector<int> ranks);
  static Ranking from_order(std::vector<int> best_first);
  // Item 0 is best, item n-1 is worst.
  static Ranking identity(int n);

  int size() const { return static_cast<int>(ranks_.size()); }
  int rank(int item) const { return ranks_[item]; }
  const std::vector<int>& ranks() const { return ranks_; }
  const std::vector<int>& order() const { return order_; }

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.ranks_ == b.ranks_;
  }

 private:
  Ranking(std::vector<int> ranks, std::vector<int> order)
      : ranks_(std::move(ranks)), order_(std::move(order)) {}

  std::vector<int> ranks_;
  std::vector<int> order_;
};

// Indifference-set structure: ordered block sizes (k_1, ..., k_s) and, when
// known, the block index of every item.
class PartitionSpec {
 public:
  static PartitionSpec from_sizes(std::vector<int> sizes);
  // labels[i] is the block of item i; the number of items carrying label b
  // must equal sizes[b].
  static PartitionSpec with_labels(std::vector<int> sizes,
                                   std::vector<int> labels);
  // Derives sizes from the labels, which must use every index in [0, s).
  static PartitionSpec from_labels(std::vector<int> labels);

  int item_count() const;
  int block_count() const { return static_cast<int>(sizes_.size()); }
  int kmax() const;
  const std::vector<int>& sizes() const { return sizes_; }
  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const;

 private:
  PartitionSpec(std::vector<int> sizes, std::optional<std::vector<int>> labels)
      : sizes_(std::move(sizes)), labels_(std::move(labels)) {}

  std::vector<int> sizes_;
  std::optional<std::vector<int>> labels_;
};

struct CrlWindow {
  int start = 0;  // position in the count-sorted order, best first
  int size = 0;
};

struct EstimateReport {
  ComparisonMatrix estimate = ComparisonMatrix::all_half(2);
  std::optional<Ranking> ranking_used;
  double objective = 0.0;  // squared Frobenius residual against the input
  std::optional<double> regularized_objective;
  std::optional<int> achieved_kmax;
  std::optional<CrlWindow> crl_window;
  int iterations = 0;
  bool converged = true;
  double feasibility_residual = 0.0;
};

}  // namespace sst
