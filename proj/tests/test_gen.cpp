#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sst/core.hpp"
#include "sst/gen.hpp"

using namespace sst;

namespace {

std::vector<bool> codeword_from_bits(int k2, unsigned bits) {
  std::vector<bool> w(k2);
  for (int i = 0; i < k2; ++i) w[i] = (bits >> i) & 1U;
  return w;
}

// Builds the two-block matrix from scratch: which block each item lands in
// after the swaps, then the entry rule.
Matrix two_block_reference(int n, int k1, double delta, const std::vector<bool>& w) {
  std::vector<int> block(n);
  for (int i = 0; i < n; ++i) block[i] = i < k1 ? 0 : 1;
  for (int i = 0; i < n - k1; ++i) {
    if (w[i]) {
      block[i] = 1;
      block[k1 + i] = 0;
    }
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = block[i] == block[j] ? 0.5 : (block[i] == 0 ? 0.5 + delta : 0.5 - delta);
    }
  }
  return m;
}

}  // namespace

TEST_SUITE("gen") {

TEST_CASE("gen_sst_instance examples") {
  InstanceConfig one;
  one.n = 4;
  one.sizes = {4};
  const auto single = gen_sst_instance(one);
  CHECK(single.matrix.values() == Matrix::Constant(4, 4, 0.5));

  InstanceConfig singletons;
  singletons.n = 6;
  singletons.sizes.assign(6, 1);
  singletons.seed = 3;
  const auto strict = gen_sst_instance(singletons);
  CHECK(kmax(strict.matrix) == 1);
  CHECK(is_pi_sst(strict.matrix, find_sst_ranking(strict.matrix, 0.0), 0.0));

  InstanceConfig cfg;
  cfg.n = 5;
  cfg.sizes = {3, 2};
  cfg.seed = 4;
  const auto inst = gen_sst_instance(cfg);
  CHECK(indifference_partition(inst.matrix, 1e-9).sizes() == std::vector<int>{3, 2});
}

TEST_CASE("generated instances are SST with the configured partition") {
  Rng rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    InstanceConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.below(15));
    int left = cfg.n;
    while (left > 0) {
      const int k = 1 + static_cast<int>(rng.below(left));
      cfg.sizes.push_back(k);
      left -= k;
    }
    cfg.seed = rng.next();
    cfg.model = rep % 2 ? InstanceModel::kRandomBiIsotone : InstanceModel::kLinkScores;
    const auto inst = gen_sst_instance(cfg);
    CHECK(validate_comparison(inst.matrix.values(), 0.0).values() == inst.matrix.values());
    const auto pi = find_sst_ranking(inst.matrix, 1e-12);
    CHECK(is_pi_sst(inst.matrix, pi, 1e-12));
    const auto found = indifference_partition(inst.matrix, 1e-9);
    CHECK(found.sizes() == cfg.sizes);
    // Labels agree with the recovered grouping up to renaming.
    const auto& truth = inst.partition.labels();
    for (int i = 0; i < cfg.n; ++i) {
      for (int j = 0; j < cfg.n; ++j) {
        CHECK((truth[i] == truth[j]) == (found.labels()[i] == found.labels()[j]));
      }
    }
  }
}

TEST_CASE("gen_sst_instance is deterministic and validates input") {
  InstanceConfig cfg;
  cfg.n = 8;
  cfg.sizes = {3, 3, 2};
  cfg.seed = 99;
  CHECK(gen_sst_instance(cfg).matrix.values() == gen_sst_instance(cfg).matrix.values());
  cfg.sizes = {3, 3};
  CHECK_THROWS_AS(gen_sst_instance(cfg), Error);
  cfg.sizes = {4, 4};
  cfg.spread = 0.0;
  try {
    gen_sst_instance(cfg);
    FAIL("expected DegenerateScores");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateScores);
  }
}

TEST_CASE("two-block packing") {
  const double delta = 1.0 / 3.0;
  const auto base = gen_two_block(4, 2, delta, {false, false});
  CHECK((base.values() - two_block_reference(4, 2, delta, {false, false})).norm() <= 1e-12);

  // Swapping both pairs exchanges the blocks: every cross-block cell flips
  // by 2 delta, 2 * k1 * k2 = 8 cells, so the distance is 32 delta^2.
  const auto swapped = gen_two_block(4, 2, delta, {true, true});
  CHECK(squared_distance(base, swapped) == doctest::Approx(32.0 * delta * delta));

  Rng rng(7);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const int k1 = (n + 1) / 2 + static_cast<int>(rng.below(n - (n + 1) / 2));
    const int k2 = n - k1;
    const double d = (1 + double(rng.below(10))) / 30.0;
    const unsigned a = static_cast<unsigned>(rng.below(1U << k2));
    const unsigned b = static_cast<unsigned>(rng.below(1U << k2));
    const auto wa = codeword_from_bits(k2, a), wb = codeword_from_bits(k2, b);
    const auto ma = gen_two_block(n, k1, d, wa), mb = gen_two_block(n, k1, d, wb);
    CHECK((ma.values() - two_block_reference(n, k1, d, wa)).norm() <= 1e-12);
    CHECK(kmax(ma) == k1);
    const int h = __builtin_popcount(a ^ b);
    CHECK(squared_distance(ma, mb) >= h * 2.0 * d * d * (n - 2 * k2) - 1e-12);
  }
  CHECK_THROWS_AS(gen_two_block(4, 1, 0.2, {false, false, false}), Error);
  CHECK_THROWS_AS(gen_two_block(4, 2, 0.5, {false, false}), Error);
  CHECK_THROWS_AS(gen_two_block(4, 2, 0.2, {false}), Error);
}

TEST_CASE("planted clique instances") {
  CHECK(gen_planted_clique_instance(10, 2, false, 1).values() ==
        Matrix::Constant(10, 10, 0.5));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 20, k = 3;
    const auto m = gen_planted_clique_instance(n, k, true, seed);
    const auto half = ComparisonMatrix::all_half(n);
    CHECK(squared_distance(m, half) == doctest::Approx(k * k / 2.0));
    CHECK(kmax(m) == n - 2 * k);
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        ones += m(i, j) == 1.0;
        if (m(i, j) == 1.0) {
          CHECK(i < n / 2);
          CHECK(j >= n / 2);
        }
      }
    }
    CHECK(ones == k * k);
  }
  CHECK_THROWS_AS(gen_planted_clique_instance(9, 2, true, 0), Error);
  CHECK_THROWS_AS(gen_planted_clique_instance(10, 6, true, 0), Error);
}

TEST_CASE("sample_observation") {
  Matrix sure = Matrix::Constant(2, 2, 0.5);
  sure(0, 1) = 1.0;
  sure(1, 0) = 0.0;
  const auto m = validate_comparison(sure, 0.0);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto y = sample_observation(m, s);
    CHECK(y(0, 1) == 1);
    CHECK(y(1, 0) == 0);
  }

  const auto half = ComparisonMatrix::all_half(2);
  double mean = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) mean += sample_observation(half, s)(0, 1);
  CHECK(std::abs(mean / 10000 - 0.5) <= 0.02);

  InstanceConfig cfg;
  cfg.n = 5;
  cfg.sizes = {2, 1, 1, 1};
  cfg.seed = 5;
  const auto inst = gen_sst_instance(cfg);
  CHECK(sample_observation(inst.matrix, 3).bits() == sample_observation(inst.matrix, 3).bits());

  // Off-diagonal marginals within 4 standard errors.
  const int draws = 4000;
  Matrix freq = Matrix::Zero(5, 5);
  for (int s = 0; s < draws; ++s) freq += sample_observation(inst.matrix, 1000 + s).to_real();
  freq /= draws;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double p = i == j ? 0.5 : inst.matrix(i, j);
      CHECK(std::abs(freq(i, j) - p) <= 4 * std::sqrt(p * (1 - p) / draws) + 1e-12);
    }
  }
}

}  // TEST_SUITE
