#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace styll {

/// Deterministic seeded RNG used everywhere randomness is required.
///
/// The generator is std::mt19937_64, whose output sequence is fully pinned by
/// the C++ standard, and all bounded draws below are derived from raw 64-bit
/// words with explicit arithmetic (no uniform_int_distribution, whose mapping
/// is implementation-defined). Identical seeds therefore produce identical
/// draws on every platform and standard library.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Unbiased via rejection of the tail of the
  /// 64-bit range that does not divide evenly by n.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("SeededRng::below: n == 0");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t r = next();
    while (r >= limit) r = next();
    return r % n;
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// First k indices of a Fisher-Yates shuffle of [0, n): a uniform sample of
  /// k distinct indices, in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("SeededRng::sample_indices: k > n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + below(n - i)]);
    }
    idx.resize(k);
    return idx;
  }

  /// Derives an independent stream seed from (seed, stream) with the
  /// splitmix64 finalizer, so per-item RNGs stay decorrelated and
  /// order-independent.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace styll
