#pragma once

#include <cstdint>
#include <vector>

#include "sst/isotonic.hpp"
#include "sst/types.hpp"

namespace sst {

// ---------------------------------------------------------------------------
// Count-Randomize-Least squares

struct CrlSettings {
  double threshold_multiplier = 1.0;  // T = multiplier * sqrt(n) * ln(n)
  std::uint64_t seed = 0;             // drives the in-window shuffle
  bool randomize = true;              // false: project onto the raw count order
  ProjectionSettings projection;
};

// Steps 1 and 2 of CRL.
struct CrlOrder {
  std::vector<int> counts;        // wins per item, sum_j Y(i, j)
  std::vector<int> count_order;   // items by decreasing count, ties by index
  CrlWindow window;               // largest run of count_order within T
  Ranking ranking;                // count_order with the window shuffled
};

double crl_threshold(int n, double multiplier);
CrlOrder crl_order(const ObservationMatrix& y, const CrlSettings& settings);

// Projects Y onto C(pi_CRL). Propagates ProjectionNotConverged.
EstimateReport crl_estimate(const ObservationMatrix& y,
                            const CrlSettings& settings = {});

// ---------------------------------------------------------------------------
// Exhaustive least squares over the SST class

struct LseSettings {
  int n_limit = 8;
  double tie_tol = 1e-9;  // objectives this close count as equal
  int threads = 0;        // 0: available parallelism
  ProjectionSettings projection;
};

// Minimum over all n! rankings of the projection residual. Among (near-)ties
// the lexicographically smallest rank array wins. Throws kTooLarge past
// n_limit.
EstimateReport lse_exact(const Matrix& y, const LseSettings& settings = {});
EstimateReport lse_exact(const ObservationMatrix& y,
                         const LseSettings& settings = {});

struct RegSettings {
  double lambda0 = 1.0;
  int n_limit = 6;
  double tie_tol = 1e-9;
  int threads = 0;
  ProjectionSettings projection;
};

// lambda(k) = lambda0 * (n - k + 1) * (ln n)^3
double regularizer(int n, int k, double lambda0);

// Minimizes ||Y - M||^2 + lambda(k_max(M)) over SST matrices by enumerating
// every ranking and every split of it into contiguous indifference blocks.
// Ties prefer the larger k_max, then the smaller rank array, then fewer
// blocks.
EstimateReport reg_lse_exact(const Matrix& y, const RegSettings& settings = {});
EstimateReport reg_lse_exact(const ObservationMatrix& y,
                             const RegSettings& settings = {});

// ---------------------------------------------------------------------------
// Oracle proxy and trivial baseline

struct OracleSettings {
  int max_enumerated_blocks = 8;
  // Take the label order as the block ranking (block 0 best) instead of
  // enumerating block orderings. Needed once s exceeds the enumeration cap.
  bool assume_label_order = false;
  double tie_tol = 1e-9;
  ProjectionSettings projection;
};

// Projection of Y onto SST matrices that are constant on the labelled
// partition's block pairs. Works on the s x s block means with weights
// k_a * k_b. Throws kTooManyBlocks when enumeration is required and
// s > max_enumerated_blocks.
EstimateReport oracle_estimate(const Matrix& y, const PartitionSpec& partition,
                               const OracleSettings& settings = {});
EstimateReport oracle_estimate(const ObservationMatrix& y,
                               const PartitionSpec& partition,
                               const OracleSettings& settings = {});

ComparisonMatrix trivial_estimate(int n);

}  // namespace sst
