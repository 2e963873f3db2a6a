#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace boolkill {

// Seed derivation. Every random decision in the toolkit is keyed by a root
// seed followed by a path of labels (command, module, record id, replica).
// Labels are folded byte-wise, so results do not depend on word size or
// endianness.

inline constexpr std::uint64_t kDefaultSeed = 20231017;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {

inline std::uint64_t fold(std::uint64_t state, std::string_view label) {
  // Length prefix keeps ("ab","c") and ("a","bc") apart.
  return splitmix64(fnv1a(label, state ^ splitmix64(label.size())));
}

inline std::uint64_t fold(std::uint64_t state, std::uint64_t value) {
  return splitmix64(state ^ splitmix64(value + 0x5851f42d4c957f2dULL));
}

inline std::uint64_t fold(std::uint64_t state, int value) {
  return fold(state, static_cast<std::uint64_t>(value));
}

inline std::uint64_t fold(std::uint64_t state, const char* label) {
  return fold(state, std::string_view(label));
}

}  // namespace detail

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t root, const Parts&... parts) {
  std::uint64_t state = splitmix64(root);
  ((state = detail::fold(state, parts)), ...);
  return state;
}

// Deterministic generator. The engine's output sequence is fixed by the
// standard; the bounded draws are done here rather than through
// std::uniform_int_distribution, whose algorithm varies between standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (engine_() >> 63) != 0; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace boolkill
