#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace sst {

// SplitMix64 finalizer; used to derive independent sub-seeds from a master
// seed and a stream tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Seeded 64-bit Mersenne Twister with distribution code written out here, so
// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform on [0, bound), bound >= 1, without modulo bias.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sst
