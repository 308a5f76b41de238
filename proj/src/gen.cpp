#include "sst/gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "sst/core.hpp"
#include "sst/error.hpp"
#include "sst/random.hpp"

namespace sst {

namespace {

constexpr int kMaxCoreDraws = 16;
constexpr int kMaxSortPasses = 1000;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Upper triangle Uniform(1/2, 1); rows sorted ascending and columns
// descending (upper parts only) until both orders hold at once.
Matrix random_bi_isotone_core(int s, Rng& rng) {
  Matrix core = Matrix::Constant(s, s, 0.5);
  for (int a = 0; a < s; ++a) {
    for (int b = a + 1; b < s; ++b) core(a, b) = 0.5 + 0.5 * rng.uniform();
  }
  std::vector<double> buf;
  for (int pass = 0; pass < kMaxSortPasses; ++pass) {
    bool changed = false;
    for (int a = 0; a + 1 < s; ++a) {
      buf.clear();
      for (int b = a + 1; b < s; ++b) buf.push_back(core(a, b));
      if (!std::is_sorted(buf.begin(), buf.end())) {
        std::sort(buf.begin(), buf.end());
        for (int b = a + 1; b < s; ++b) core(a, b) = buf[b - a - 1];
        changed = true;
      }
    }
    for (int b = 1; b < s; ++b) {
      buf.clear();
      for (int a = 0; a < b; ++a) buf.push_back(core(a, b));
      if (!std::is_sorted(buf.begin(), buf.end(), std::greater<>())) {
        std::sort(buf.begin(), buf.end(), std::greater<>());
        for (int a = 0; a < b; ++a) core(a, b) = buf[a];
        changed = true;
      }
    }
    if (!changed) {
      for (int a = 0; a < s; ++a) {
        for (int b = a + 1; b < s; ++b) core(b, a) = 1.0 - core(a, b);
      }
      return core;
    }
  }
  throw Error(ErrorCode::kDegenerateScores,
              "row/column sorting of the random core did not settle");
}

Matrix expand_core(const Matrix& core, const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = labels[i] == labels[j] ? 0.5 : core(labels[i], labels[j]);
    }
  }
  return m;
}

bool recovers_partition(const ComparisonMatrix& m,
                        const std::vector<int>& sizes) {
  try {
    find_sst_ranking(m, 1e-12);
    return indifference_partition(m, 1e-9).sizes() == sizes;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

Matrix link_core(int s, double spread) {
  Matrix core(s, s);
  for (int a = 0; a < s; ++a) {
    const double va = s == 1 ? 0.0 : spread * double(s - 1 - a) / double(s - 1);
    for (int b = 0; b < s; ++b) {
      const double vb = s == 1 ? 0.0 : spread * double(s - 1 - b) / double(s - 1);
      core(a, b) = a == b ? 0.5 : logistic(va - vb);
    }
  }
  return core;
}

Instance gen_sst_instance(const InstanceConfig& cfg) {
  if (cfg.n < 2) throw Error(ErrorCode::kInvalidArgument, "instance needs n >= 2");
  auto partition = PartitionSpec::from_sizes(cfg.sizes);
  if (partition.item_count() != cfg.n) {
    throw Error(ErrorCode::kInvalidArgument, "block sizes must sum to n");
  }
  const int s = partition.block_count();

  std::vector<int> by_position = partition.labels();
  std::vector<int> items(cfg.n);
  std::iota(items.begin(), items.end(), 0);
  if (cfg.permute_items) {
    Rng shuffle_rng(mix_seed(cfg.seed, 1));
    shuffle_rng.shuffle(std::span<int>(items));
  }
  std::vector<int> labels(cfg.n);
  for (int p = 0; p < cfg.n; ++p) labels[items[p]] = by_position[p];

  Rng core_rng(mix_seed(cfg.seed, 2));
  const int draws = cfg.model == InstanceModel::kRandomBiIsotone ? kMaxCoreDraws : 1;
  for (int attempt = 0; attempt < draws; ++attempt) {
    Matrix core;
    if (cfg.model == InstanceModel::kLinkScores) {
      if (s > 1 && !(cfg.spread > 0.0)) {
        throw Error(ErrorCode::kDegenerateScores,
                    "score spread must be positive with more than one block");
      }
      core = link_core(s, cfg.spread);
    } else {
      core = random_bi_isotone_core(s, core_rng);
    }
    auto m = validate_comparison(expand_core(core, labels), 1e-12);
    if (recovers_partition(m, cfg.sizes)) {
      return Instance{std::move(m), PartitionSpec::with_labels(cfg.sizes, labels)};
    }
  }
  throw Error(ErrorCode::kDegenerateScores,
              "block values collide; blocks are not distinguishable");
}

ComparisonMatrix gen_two_block(int n, int k1, double delta,
                               const std::vector<bool>& codeword) {
  const int k2 = n - k1;
  if (n < 2 || k2 < 1 || k1 < k2) {
    throw Error(ErrorCode::kInvalidArgument, "two-block packing needs k1 >= n - k1 >= 1");
  }
  if (!(delta > 0.0) || delta > 1.0 / 3.0) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1/3]");
  }
  if (static_cast<int>(codeword.size()) != k2) {
    throw Error(ErrorCode::kInvalidArgument, "codeword length must equal n - k1");
  }
  std::vector<bool> in_first(n);
  for (int i = 0; i < n; ++i) in_first[i] = i < k1;
  for (int i = 0; i < k2; ++i) {
    if (codeword[i]) std::swap(in_first[i], in_first[k1 + i]);
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (in_first[i] == in_first[j]) {
        m(i, j) = 0.5;
      } else {
        m(i, j) = in_first[i] ? 0.5 + delta : 0.5 - delta;
      }
    }
  }
  return validate_comparison(m, 1e-12);
}

ComparisonMatrix gen_planted_clique_instance(int n, int k, bool present,
                                             std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "planted clique needs an even n >= 2");
  }
  if (k < 1 || 2 * k > n) {
    throw Error(ErrorCode::kInvalidArgument, "planted clique needs 1 <= k <= n/2");
  }
  if (!present) return ComparisonMatrix::all_half(n);

  Matrix base = Matrix::Constant(n, n, 0.5);
  base.topRightCorner(k, k).setOnes();
  base.bottomLeftCorner(k, k).setZero();

  const int half = n / 2;
  std::vector<int> perm(half);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<int>(perm));
  std::vector<int> sigma(n);
  for (int i = 0; i < half; ++i) {
    sigma[i] = perm[i];
    sigma[half + i] = half + perm[i];
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(sigma[i], sigma[j]) = base(i, j);
  }
  return validate_comparison(m, 0.0);
}

ObservationMatrix sample_observation(const ComparisonMatrix& m,
                                     std::uint64_t seed) {
  const int n = m.size();
  Rng rng(seed);
  BitMatrix y(n, n);
  for (int i = 0; i < n; ++i) {
    y(i, i) = rng.bernoulli(0.5) ? 1 : 0;
    for (int j = i + 1; j < n; ++j) {
      const std::uint8_t win = rng.bernoulli(m(i, j)) ? 1 : 0;
      y(i, j) = win;
      y(j, i) = 1 - win;
    }
  }
  return ObservationMatrix::from_bits(std::move(y));
}

}  // namespace sst
