#pragma once

// Test-only helpers: a synthetic fact pool and an unconstrained random
// chain generator (any earlier target, any polarity, connectives anywhere).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "boolkill/ingest.hpp"
#include "boolkill/logic.hpp"
#include "boolkill/random.hpp"

namespace boolkill::testing {

inline std::string synthetic_sentence(Rng& rng, std::size_t words) {
  static const std::array<const char*, 48> vocab = {
      "the",      "a",         "planet",   "rock",     "water",    "energy",   "cell",      "animal",
      "plant",    "sun",       "moon",     "layer",    "surface",  "heat",     "light",     "mineral",
      "organism", "produces",  "contains", "absorbs",  "releases", "forms",    "moves",     "around",
      "through",  "under",     "during",   "most",     "small",    "large",    "dense",     "warm",
      "cold",     "ocean",     "soil",     "air",      "carbon",   "oxygen",   "nucleus",   "orbit",
      "season",   "climate",   "volcano",  "glacier",  "river",    "species",  "tissue",    "crystal"};
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    std::string w = vocab[rng.below(vocab.size())];
    if (i == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s + ".";
}

// n facts, alternating True/False, joined like entailment pairs. Token
// counts resemble a science entailment corpus (premise 13-19 words,
// hypothesis 5-8 words).
inline std::vector<Fact> synthetic_facts(std::size_t n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "synthetic-facts"));
  std::vector<Fact> facts;
  facts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string premise = synthetic_sentence(rng, rng.between(13, 19));
    const std::string hypothesis = synthetic_sentence(rng, rng.between(5, 8));
    facts.push_back(Fact{"syn-" + std::to_string(i), premise + " So, " + hypothesis,
                         i % 2 == 0 ? Truth::True : Truth::False});
  }
  return facts;
}

inline Chain random_general_chain(Rng& rng, std::size_t k, bool allow_connectives) {
  Chain c{rng.coin() ? Truth::True : Truth::False, {}};
  for (std::size_t i = 1; i <= k; ++i) {
    if (allow_connectives && i >= 2 && rng.below(3) == 0) {
      const std::size_t a = rng.below(i);
      std::size_t b = rng.below(i - 1);
      if (b >= a) ++b;
      c.statements.push_back(Connect{rng.coin() ? Op::And : Op::Or, a, b, rng.below(4) != 0});
    } else {
      c.statements.push_back(Assert{rng.below(i), rng.coin()});
    }
  }
  return c;
}

}  // namespace boolkill::testing
