#include "sst/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sst/core.hpp"
#include "sst/error.hpp"
#include "sst/parallel.hpp"
#include "sst/random.hpp"

namespace sst {

namespace {

void check_square_input(const Matrix& y) {
  if (y.rows() != y.cols() || y.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "input must be square with n >= 2");
  }
}

// All rank arrays of size n in lexicographic order.
std::vector<std::vector<int>> all_rank_arrays(int n) {
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(ranks);
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CRL

double crl_threshold(int n, double multiplier) {
  return multiplier * std::sqrt(double(n)) * std::log(double(n));
}

CrlOrder crl_order(const ObservationMatrix& y, const CrlSettings& settings) {
  if (!(settings.threshold_multiplier > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold multiplier must be > 0");
  }
  const int n = y.size();
  std::vector<int> counts(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) counts[i] += y(i, j);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });

  // Counts are sorted, so the pairwise range condition only has to hold
  // between the ends of a window.
  const double threshold = crl_threshold(n, settings.threshold_multiplier);
  CrlWindow window{0, 1};
  int end = 0;
  for (int start = 0; start < n; ++start) {
    end = std::max(end, start);
    while (end + 1 < n && counts[order[start]] - counts[order[end + 1]] <= threshold) {
      ++end;
    }
    if (end - start + 1 > window.size) window = {start, end - start + 1};
  }

  std::vector<int> shuffled = order;
  if (settings.randomize) {
    Rng rng(settings.seed);
    rng.shuffle(std::span<int>(shuffled).subspan(window.start, window.size));
  }
  return CrlOrder{std::move(counts), std::move(order), window,
                  Ranking::from_order(std::move(shuffled))};
}

EstimateReport crl_estimate(const ObservationMatrix& y,
                            const CrlSettings& settings) {
  CrlOrder order = crl_order(y, settings);
  EstimateReport report =
      project_onto_class(y.to_real(), order.ranking, std::nullopt, settings.projection);
  report.crl_window = order.window;
  return report;
}

// ---------------------------------------------------------------------------
// Exhaustive least squares

EstimateReport lse_exact(const Matrix& y, const LseSettings& settings) {
  check_square_input(y);
  const int n = static_cast<int>(y.rows());
  if (n > settings.n_limit) {
    throw Error(ErrorCode::kTooLarge, "lse_exact: n = " + std::to_string(n) +
                                          " exceeds n_limit = " +
                                          std::to_string(settings.n_limit));
  }
  const auto rankings = all_rank_arrays(n);
  std::vector<double> objectives(rankings.size());
  parallel_for(rankings.size(), settings.threads, [&](std::size_t r) {
    objectives[r] = project_onto_class(y, Ranking::from_ranks(rankings[r]),
                                       std::nullopt, settings.projection)
                        .objective;
  });
  const double best = *std::min_element(objectives.begin(), objectives.end());
  std::size_t winner = 0;
  while (objectives[winner] > best + settings.tie_tol) ++winner;
  return project_onto_class(y, Ranking::from_ranks(rankings[winner]),
                            std::nullopt, settings.projection);
}

EstimateReport lse_exact(const ObservationMatrix& y, const LseSettings& settings) {
  return lse_exact(y.to_real(), settings);
}

// ---------------------------------------------------------------------------
// Regularized least squares

double regularizer(int n, int k, double lambda0) {
  const double log_n = std::log(double(n));
  return lambda0 * double(n - k + 1) * log_n * log_n * log_n;
}

namespace {

struct Composition {
  std::vector<int> block_of_position;
  int largest = 0;
  int blocks = 0;
};

// Bit p of mask set means a cut between positions p and p + 1.
Composition composition_from_mask(int n, unsigned mask) {
  Composition c;
  c.block_of_position.resize(n);
  int block = 0;
  int run = 0;
  for (int p = 0; p < n; ++p) {
    c.block_of_position[p] = block;
    ++run;
    if (p + 1 == n || (mask >> p) & 1U) {
      c.largest = std::max(c.largest, run);
      run = 0;
      ++block;
    }
  }
  c.blocks = block;
  return c;
}

// Within a block, permuting items leaves the feasible set unchanged. Keep only
// the member with the smallest rank array: ranks increase with item index
// inside every block.
bool canonical(const std::vector<int>& order, const Composition& c) {
  for (std::size_t p = 0; p + 1 < order.size(); ++p) {
    if (c.block_of_position[p] == c.block_of_position[p + 1] &&
        order[p] < order[p + 1]) {
      return false;
    }
  }
  return true;
}

struct RegCandidate {
  double score = std::numeric_limits<double>::infinity();
  int kmax = 0;
  std::size_t ranking = 0;
  int blocks = 0;
  unsigned mask = 0;
  bool valid = false;
};

}  // namespace

EstimateReport reg_lse_exact(const Matrix& y, const RegSettings& settings) {
  check_square_input(y);
  const int n = static_cast<int>(y.rows());
  if (n > settings.n_limit) {
    throw Error(ErrorCode::kTooLarge, "reg_lse_exact: n = " + std::to_string(n) +
                                          " exceeds n_limit = " +
                                          std::to_string(settings.n_limit));
  }
  if (!(settings.lambda0 >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda0 must be >= 0");
  }
  const auto rankings = all_rank_arrays(n);
  const unsigned masks = 1U << (n - 1);
  std::vector<Composition> compositions;
  for (unsigned mask = 0; mask < masks; ++mask) {
    compositions.push_back(composition_from_mask(n, mask));
  }

  auto labels_for = [&](const Ranking& pi, const Composition& c) {
    BlockConstraint blocks{std::vector<int>(n)};
    for (int p = 0; p < n; ++p) blocks.labels[pi.order()[p]] = c.block_of_position[p];
    return blocks;
  };

  std::vector<RegCandidate> candidates(rankings.size() * masks);
  parallel_for(rankings.size(), settings.threads, [&](std::size_t r) {
    const Ranking pi = Ranking::from_ranks(rankings[r]);
    for (unsigned mask = 0; mask < masks; ++mask) {
      const Composition& c = compositions[mask];
      if (!canonical(pi.order(), c)) continue;
      const double residual =
          project_onto_class(y, pi, labels_for(pi, c), settings.projection).objective;
      candidates[r * masks + mask] = {residual + regularizer(n, c.largest, settings.lambda0),
                                      c.largest, r, c.blocks, mask, true};
    }
  });

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.valid) best = std::min(best, c.score);
  }
  const RegCandidate* winner = nullptr;
  for (const auto& c : candidates) {
    if (!c.valid || c.score > best + settings.tie_tol) continue;
    if (winner == nullptr || c.kmax > winner->kmax ||
        (c.kmax == winner->kmax &&
         (c.ranking < winner->ranking ||
          (c.ranking == winner->ranking &&
           (c.blocks < winner->blocks ||
            (c.blocks == winner->blocks && c.mask < winner->mask)))))) {
      winner = &c;
    }
  }

  const Ranking pi = Ranking::from_ranks(rankings[winner->ranking]);
  const Composition& c = compositions[winner->mask];
  EstimateReport report =
      project_onto_class(y, pi, labels_for(pi, c), settings.projection);
  report.achieved_kmax = c.largest;
  report.regularized_objective =
      report.objective + regularizer(n, c.largest, settings.lambda0);
  return report;
}

EstimateReport reg_lse_exact(const ObservationMatrix& y, const RegSettings& settings) {
  return reg_lse_exact(y.to_real(), settings);
}

// ---------------------------------------------------------------------------
// Oracle proxy

EstimateReport oracle_estimate(const Matrix& y, const PartitionSpec& partition,
                               const OracleSettings& settings) {
  check_square_input(y);
  const int n = static_cast<int>(y.rows());
  if (partition.item_count() != n) {
    throw Error(ErrorCode::kInvalidArgument, "partition does not cover the items");
  }
  const auto& labels = partition.labels();
  const auto& sizes = partition.sizes();
  const int s = partition.block_count();

  if (s == 1) {
    EstimateReport report;
    report.estimate = ComparisonMatrix::all_half(n);
    report.ranking_used = Ranking::identity(n);
    report.objective = objective(y, report.estimate.values());
    report.achieved_kmax = n;
    return report;
  }
  if (!settings.assume_label_order && s > settings.max_enumerated_blocks) {
    throw Error(ErrorCode::kTooManyBlocks,
                "oracle: " + std::to_string(s) + " blocks exceed the enumeration cap of " +
                    std::to_string(settings.max_enumerated_blocks));
  }

  Matrix sums = Matrix::Zero(s, s);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sums(labels[i], labels[j]) += y(i, j);
  }
  Matrix weights(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) weights(a, b) = double(sizes[a]) * sizes[b];
  }
  const Matrix means = sums.cwiseQuotient(weights);

  std::vector<std::vector<int>> block_rankings;
  if (settings.assume_label_order) {
    block_rankings.push_back(Ranking::identity(s).ranks());
  } else {
    block_rankings = all_rank_arrays(s);
  }
  std::vector<double> objectives(block_rankings.size());
  for (std::size_t r = 0; r < block_rankings.size(); ++r) {
    objectives[r] = project_onto_class_weighted(means, weights,
                                                Ranking::from_ranks(block_rankings[r]),
                                                settings.projection)
                        .objective;
  }
  const double best = *std::min_element(objectives.begin(), objectives.end());
  std::size_t winner = 0;
  while (objectives[winner] > best + settings.tie_tol) ++winner;
  const Ranking block_pi = Ranking::from_ranks(block_rankings[winner]);
  const EstimateReport reduced =
      project_onto_class_weighted(means, weights, block_pi, settings.projection);

  Matrix full(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      full(i, j) = labels[i] == labels[j] ? 0.5 : reduced.estimate(labels[i], labels[j]);
    }
  }
  // Items inherit their block's rank; ties inside a block go by item index.
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  std::stable_sort(items.begin(), items.end(), [&](int a, int b) {
    return block_pi.rank(labels[a]) > block_pi.rank(labels[b]);
  });

  EstimateReport report;
  report.estimate = validate_comparison(full, 1e-8);
  report.ranking_used = Ranking::from_order(std::move(items));
  report.objective = objective(y, report.estimate.values());
  report.achieved_kmax = partition.kmax();
  report.iterations = reduced.iterations;
  report.converged = reduced.converged;
  report.feasibility_residual = reduced.feasibility_residual;
  return report;
}

EstimateReport oracle_estimate(const ObservationMatrix& y,
                               const PartitionSpec& partition,
                               const OracleSettings& settings) {
  return oracle_estimate(y.to_real(), partition, settings);
}

ComparisonMatrix trivial_estimate(int n) { return ComparisonMatrix::all_half(n); }

}  // namespace sst
