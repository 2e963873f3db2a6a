#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "boolkill/error.hpp"
#include "boolkill/ingest.hpp"
#include "boolkill/logic.hpp"
#include "boolkill/random.hpp"
#include "boolkill/text.hpp"

namespace boolkill {

enum class Mode : std::uint8_t { NotOnly, NotAndOr };

constexpr std::string_view to_string(Mode m) { return m == Mode::NotOnly ? "not" : "not-and-or"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "not" || s == "not-only") return Mode::NotOnly;
  if (s == "not-and-or") return Mode::NotAndOr;
  throw ConfigError("unknown mode \"" + std::string(s) + "\" (expected not or not-and-or)");
}

// Where the single connective of a not-and-or sample goes: always the last
// statement, or a uniform position in [2, k] followed by plain assertions.
enum class ConnectivePlacement : std::uint8_t { Final, Interior };

struct SubsetSpec {
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  Mode mode = Mode::NotOnly;
  std::size_t per_fact = 1;
  ConnectivePlacement placement = ConnectivePlacement::Final;

  void validate() const {
    if (k_max < k_min) {
      throw ConfigError("k_max (" + std::to_string(k_max) + ") is below k_min (" + std::to_string(k_min) + ")");
    }
    if (per_fact == 0) throw ConfigError("per_fact must be at least 1");
    if (mode == Mode::NotAndOr && k_max < 2) {
      throw ConfigError("mode not-and-or needs k_max >= 2: a connective joins two earlier statements");
    }
  }

  // "u1-4" for NOT-only subsets, "ut5-8" for subsets with connectives.
  std::string name() const {
    return std::string(mode == Mode::NotOnly ? "u" : "ut") + std::to_string(k_min) + "-" + std::to_string(k_max);
  }

  friend bool operator==(const SubsetSpec&, const SubsetSpec&) = default;
};

inline const SubsetSpec kBaseSpec{0, 0, Mode::NotOnly, 1, ConnectivePlacement::Final};

struct Sample {
  std::string id;
  std::string base_id;
  std::string fact_id;
  std::string text;
  Truth label = Truth::True;
  std::size_t k = 0;
  Mode mode = Mode::NotOnly;

  friend bool operator==(const Sample&, const Sample&) = default;
};

inline std::string base_sample_id(std::string_view fact_id) {
  return std::string(fact_id) + ":" + kBaseSpec.name() + ":0";
}

inline std::string sample_id(std::string_view fact_id, const SubsetSpec& spec, std::size_t replica) {
  return std::string(fact_id) + ":" + spec.name() + ":" + std::to_string(replica);
}

struct BalanceReport {
  std::size_t total = 0;
  std::size_t n_true = 0;
  std::size_t n_false = 0;
  std::map<std::size_t, std::size_t> per_k;
  std::map<std::size_t, double> mean_tokens_per_k;
  // Indexed by label (0 = True, 1 = False): occurrences of the word -> samples.
  std::map<std::size_t, std::size_t> true_word_hist[2];
  std::map<std::size_t, std::size_t> false_word_hist[2];
  double mean_tokens = 0.0;
  std::size_t min_tokens = 0;
  std::size_t max_tokens = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

struct Dataset {
  std::vector<Sample> samples;
  SubsetSpec spec;
  std::uint64_t seed = 0;
  BalanceReport balance;
};

// Stratum used by rebalancing. Samples sharing a key are indistinguishable
// by depth and by the counts of the template words that could act as a
// shortcut ("true", "false", and the connective markers "Both"/"Either").
struct BucketKey {
  std::size_t k = 0;
  std::size_t n_false = 0;
  std::size_t n_true = 0;
  std::size_t n_both = 0;
  std::size_t n_either = 0;

  auto operator<=>(const BucketKey&) const = default;

  std::string to_string() const {
    return "(k=" + std::to_string(k) + ", false=" + std::to_string(n_false) + ", true=" + std::to_string(n_true) +
           ", both=" + std::to_string(n_both) + ", either=" + std::to_string(n_either) + ")";
  }
};

inline BucketKey bucket_key(const Sample& s) {
  return {s.k, count_word(s.text, "false"), count_word(s.text, "true"), count_word(s.text, "both"),
          count_word(s.text, "either")};
}

// Draws one chain of depth k over a fact with the given truth value.
inline Chain random_chain(Rng& rng, std::size_t k, Mode mode, ConnectivePlacement placement, Truth fact_truth) {
  Chain chain{fact_truth, {}};
  chain.statements.reserve(k);
  std::size_t connective_at = 0;
  if (mode == Mode::NotAndOr && k >= 2) {
    connective_at = placement == ConnectivePlacement::Final ? k : rng.between(2, k);
  }
  for (std::size_t i = 1; i <= k; ++i) {
    if (i == connective_at) {
      const Op op = rng.coin() ? Op::And : Op::Or;
      const std::size_t other = rng.between(0, i - 2);
      chain.statements.push_back(Connect{op, i - 1, other, true});
    } else {
      chain.statements.push_back(Assert{i - 1, rng.coin()});
    }
  }
  return chain;
}

namespace detail {

inline void reject_degenerate(const Fact& fact) {
  const std::string_view text = trim(fact.text);
  if (text.empty()) throw DataError("fact " + fact.id + " has empty text");
  if (has_line_break(fact.text)) throw DataError("fact " + fact.id + " contains a line break");
  LineCursor c(text);
  if (c.statement_ref() && c.literal(":")) {
    throw DataError("fact " + fact.id + " starts with a statement label, which collides with the template");
  }
  LineCursor q(text);
  if (q.literal("Is ") && q.statement_ref() && q.literal(" true or false?")) {
    throw DataError("fact " + fact.id + " starts with the question template");
  }
}

}  // namespace detail

// The label comes from the chain evaluation and nothing else.
inline Sample build_sample(const Fact& fact, const std::vector<Statement>& statements, const SubsetSpec& spec,
                           std::size_t replica) {
  const Chain chain{fact.truth, statements};
  return Sample{sample_id(fact.id, spec, replica),
                base_sample_id(fact.id),
                fact.id,
                render(chain, fact.text).text,
                final_label(chain),
                chain.depth(),
                spec.mode};
}

// One uniformly drawn sample for (fact, replica).
inline Sample make_sample(const Fact& fact, const SubsetSpec& spec, std::uint64_t seed, std::size_t replica) {
  Rng rng(derive_seed(seed, "builder", spec.name(), fact.id, static_cast<std::uint64_t>(replica)));
  const std::size_t k = rng.between(spec.k_min, spec.k_max);
  return build_sample(fact, random_chain(rng, k, spec.mode, spec.placement, fact.truth).statements, spec, replica);
}

// Unbalanced candidate stream: `rounds` passes over the facts, each pass
// emitting per_fact replicas per fact, in fact order.
inline std::vector<Sample> generate_candidates(const std::vector<Fact>& facts, const SubsetSpec& spec,
                                               std::uint64_t seed, std::size_t rounds = 1) {
  spec.validate();
  if (facts.empty()) throw ConfigError("no facts to generate from");
  check_unique_ids(facts);
  for (const auto& f : facts) detail::reject_degenerate(f);
  std::vector<Sample> out;
  out.reserve(facts.size() * spec.per_fact * rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (const auto& f : facts) {
      for (std::size_t q = 0; q < spec.per_fact; ++q) {
        out.push_back(make_sample(f, spec, seed, r * spec.per_fact + q));
      }
    }
  }
  return out;
}

inline BalanceReport audit(const Dataset& dataset);

struct GenerateOptions {
  // Samples to emit; defaults to |facts| * per_fact. Odd targets are rounded
  // down so the two labels can match exactly.
  std::optional<std::size_t> target;
  // Passes over the fact list (fresh replicas each pass) before giving up.
  std::size_t max_rounds = 8;
};

// Generates a balanced subset by rejection. Candidates are drawn in stream
// order (round, fact, replica); each one waits in the bucket for its key and
// label until a sample of the opposite label arrives in the same bucket,
// then both are accepted. Generation stops once `target` samples are
// accepted. Output keeps stream order.
inline Dataset generate(const std::vector<Fact>& facts, const SubsetSpec& spec, std::uint64_t seed,
                        const GenerateOptions& options = {}) {
  spec.validate();
  if (facts.empty()) throw ConfigError("no facts to generate from");
  check_unique_ids(facts);
  for (const auto& f : facts) detail::reject_degenerate(f);

  std::size_t target = options.target.value_or(facts.size() * spec.per_fact);
  target -= target % 2;
  if (target == 0) throw ConfigError("target sample count must be at least 2");
  // Replicas of depth-0 samples repeat the same text.
  const std::size_t rounds = spec.k_max == 0 ? 1 : std::max<std::size_t>(1, options.max_rounds);

  struct Pending {
    std::deque<std::size_t> waiting[2];
  };
  std::map<BucketKey, Pending> buckets;
  std::vector<Sample> stream;
  std::vector<std::size_t> accepted;

  for (std::size_t r = 0; r < rounds && accepted.size() < target; ++r) {
    for (std::size_t fi = 0; fi < facts.size() && accepted.size() < target; ++fi) {
      for (std::size_t q = 0; q < spec.per_fact && accepted.size() < target; ++q) {
        stream.push_back(make_sample(facts[fi], spec, seed, r * spec.per_fact + q));
        const std::size_t idx = stream.size() - 1;
        const int label = static_cast<int>(stream[idx].label);
        auto& pending = buckets[bucket_key(stream[idx])];
        auto& partners = pending.waiting[1 - label];
        if (partners.empty()) {
          pending.waiting[label].push_back(idx);
        } else {
          accepted.push_back(partners.front());
          accepted.push_back(idx);
          partners.pop_front();
        }
      }
    }
  }
  if (accepted.size() < target) {
    throw DataError("facts too few to satisfy balance quotas for " + spec.name() + ": requested " +
                    std::to_string(target) + " samples, achievable maximum " + std::to_string(accepted.size()));
  }

  std::sort(accepted.begin(), accepted.end());
  Dataset out;
  out.spec = spec;
  out.seed = seed;
  out.samples.reserve(accepted.size());
  for (std::size_t idx : accepted) out.samples.push_back(std::move(stream[idx]));
  out.balance = audit(out);
  return out;
}

// Stratifies candidates by BucketKey and keeps min(#True, #False) samples of
// each label per bucket, chosen by a seeded shuffle. Output keeps the
// candidates' order.
inline Dataset rebalance(const std::vector<Sample>& candidates, std::uint64_t seed, const SubsetSpec& spec = {}) {
  std::map<BucketKey, std::vector<std::size_t>> by_label[2];
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    by_label[static_cast<int>(candidates[i].label)][bucket_key(candidates[i])].push_back(i);
  }

  std::vector<std::size_t> keep;
  std::vector<std::string> unmatched;
  for (int label = 0; label < 2; ++label) {
    for (const auto& [key, idx] : by_label[label]) {
      if (!by_label[1 - label].contains(key)) {
        unmatched.push_back(std::string(to_string(static_cast<Truth>(label))) + " " + key.to_string());
      }
    }
  }
  for (auto& [key, true_idx] : by_label[0]) {
    auto it = by_label[1].find(key);
    if (it == by_label[1].end()) continue;
    auto& false_idx = it->second;
    const std::size_t m = std::min(true_idx.size(), false_idx.size());
    const std::string tag = key.to_string();
    Rng rng_t(derive_seed(seed, "rebalance", tag, "true"));
    Rng rng_f(derive_seed(seed, "rebalance", tag, "false"));
    rng_t.shuffle(true_idx);
    rng_f.shuffle(false_idx);
    keep.insert(keep.end(), true_idx.begin(), true_idx.begin() + static_cast<std::ptrdiff_t>(m));
    keep.insert(keep.end(), false_idx.begin(), false_idx.begin() + static_cast<std::ptrdiff_t>(m));
  }
  if (!candidates.empty() && keep.empty()) {
    std::string msg = "no bucket holds both labels; unmatched keys:";
    for (const auto& u : unmatched) msg += " " + u + ";";
    throw DataError(msg);
  }

  std::sort(keep.begin(), keep.end());
  Dataset out;
  out.spec = spec;
  out.seed = seed;
  out.samples.reserve(keep.size());
  for (std::size_t i : keep) out.samples.push_back(candidates[i]);
  out.balance = audit(out);
  return out;
}

inline BalanceReport audit(const Dataset& dataset) {
  BalanceReport r;
  r.total = dataset.samples.size();
  std::map<std::size_t, std::size_t> tokens_per_k;
  std::size_t tokens_sum = 0;
  r.min_tokens = std::numeric_limits<std::size_t>::max();
  std::unordered_set<std::string_view> ids;

  for (const auto& s : dataset.samples) {
    const int label = static_cast<int>(s.label);
    (s.label == Truth::True ? r.n_true : r.n_false) += 1;
    r.per_k[s.k] += 1;
    r.true_word_hist[label][count_word(s.text, "true")] += 1;
    r.false_word_hist[label][count_word(s.text, "false")] += 1;
    const std::size_t tokens = count_tokens(s.text);
    tokens_sum += tokens;
    tokens_per_k[s.k] += tokens;
    r.min_tokens = std::min(r.min_tokens, tokens);
    r.max_tokens = std::max(r.max_tokens, tokens);
    if (!ids.insert(s.id).second) r.violations.push_back("duplicate sample id " + s.id);
    try {
      const auto parsed = parse(s.text);
      if (parsed.statements.size() != s.k) {
        r.violations.push_back("sample " + s.id + " has depth " + std::to_string(parsed.statements.size()) +
                               " but records k=" + std::to_string(s.k));
      }
    } catch (const ParseError& e) {
      r.violations.push_back("sample " + s.id + " does not parse: " + e.what());
    }
  }
  if (r.total == 0) {
    r.min_tokens = 0;
  } else {
    r.mean_tokens = static_cast<double>(tokens_sum) / static_cast<double>(r.total);
    for (const auto& [k, sum] : tokens_per_k) {
      r.mean_tokens_per_k[k] = static_cast<double>(sum) / static_cast<double>(r.per_k[k]);
    }
  }

  // Identical per-label histograms already force equal label counts, so an
  // odd-sized set can never pass.
  if (r.n_true != r.n_false) {
    r.violations.push_back("label ratio " + std::to_string(r.n_true) + ":" + std::to_string(r.n_false) +
                           " is not 1:1");
  }
  if (r.true_word_hist[0] != r.true_word_hist[1]) {
    r.violations.push_back("per-label histograms of the word \"true\" differ");
  }
  if (r.false_word_hist[0] != r.false_word_hist[1]) {
    r.violations.push_back("per-label histograms of the word \"false\" differ");
  }
  return r;
}

// Recomputes every label through text -> parse -> expression tree, using the
// fact truth looked up by fact_id. Returns ids whose stored label differs.
inline std::vector<std::string> check_labels(const Dataset& dataset, const std::vector<Fact>& facts) {
  std::unordered_map<std::string_view, Truth> truth;
  for (const auto& f : facts) truth.emplace(f.id, f.truth);
  std::vector<std::string> wrong;
  for (const auto& s : dataset.samples) {
    auto it = truth.find(s.fact_id);
    if (it == truth.end()) throw DataError("sample " + s.id + " refers to unknown fact " + s.fact_id);
    const auto parsed = parse(s.text);
    if (brute_force_eval(Chain{it->second, parsed.statements}) != s.label) wrong.push_back(s.id);
  }
  return wrong;
}

}  // namespace boolkill
