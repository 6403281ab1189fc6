#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qcl {

// FNV-1a over the tag bytes. Only used to turn purpose tags into stream keys.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seeded random stream. Every consumer derives its own stream from
// (seed, purpose tag, index), so adding a new consumer never shifts the
// numbers another one sees. The engine and seed_seq are fully specified by
// the standard, and the bounded draws below avoid the implementation-defined
// std distributions, so streams are identical across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) {
    const std::uint64_t t = tag_hash(tag);
    std::seed_seq seq{lo(seed), hi(seed), lo(t), hi(t), lo(index), hi(index)};
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

  // First `count` entries of a uniformly random permutation of [0, n).
  std::vector<std::uint32_t> sample_distinct(std::uint64_t n, std::size_t count) {
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0U);
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + below(n - i)]);
    }
    pool.resize(count);
    return pool;
  }

 private:
  static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
  static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

  std::mt19937_64 engine_;
};

// Child seed for trial `index` of an experiment seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  Rng r(seed, tag, index);
  return r();
}

}  // namespace qcl
