#pragma once

#include <cstdint>
#include <vector>

#include "sst/types.hpp"

namespace sst {

enum class InstanceModel {
  kLinkScores,       // logistic link of equally spaced block scores
  kRandomBiIsotone,  // sorted uniform core, not uniform over the SST class
};

struct InstanceConfig {
  int n = 0;
  std::vector<int> sizes;  // block sizes, best block first
  InstanceModel model = InstanceModel::kLinkScores;
  std::uint64_t seed = 0;
  double spread = 2.0;       // score range for kLinkScores
  bool permute_items = true; // randomly assign items to blocks
};

struct Instance {
  ComparisonMatrix matrix;
  PartitionSpec partition;  // carries labels; block 0 is the best block
};

// Draws M* respecting the indifference partition given by cfg.sizes. An s x s
// core is expanded into constant blocks (1/2 inside diagonal blocks) and items
// are assigned to blocks by a seeded shuffle. The result is checked to be SST
// and to reproduce cfg.sizes under indifference_partition(., 1e-9); a core
// whose blocks cannot be told apart throws Error(kDegenerateScores).
Instance gen_sst_instance(const InstanceConfig& cfg);

// The s x s core of a link-scores instance: core(a, b) = sigma(v_a - v_b) with
// v equally spaced in [0, spread], v_0 = spread.
Matrix link_core(int s, double spread);

// Base matrix of the two-indifference-set packing: items [0, k1) beat items
// [k1, n) with probability 1/2 + delta, everything else is 1/2. Item i and
// item k1 + i trade places whenever codeword[i] is set. Requires
// k1 >= n - k1, 0 < delta <= 1/3 and codeword.size() == n - k1.
ComparisonMatrix gen_two_block(int n, int k1, double delta,
                               const std::vector<bool>& codeword);

// Planted-clique comparison instance on n (even) items with clique size k
// (2k <= n). Without a clique this is the all-half matrix. With one, items
// [0, k) beat items [n-k, n) with probability 1 and everything else is 1/2,
// after which one seeded permutation of n/2 items is applied to both halves
// of the rows and columns.
ComparisonMatrix gen_planted_clique_instance(int n, int k, bool present,
                                             std::uint64_t seed);

// Y(i, j) ~ Bernoulli(M(i, j)) for i < j, Y(j, i) = 1 - Y(i, j), fair coins on
// the diagonal. Deterministic in the seed.
ObservationMatrix sample_observation(const ComparisonMatrix& m,
                                     std::uint64_t seed);

}  // namespace sst
