#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "boolkill/error.hpp"
#include "boolkill/logic.hpp"
#include "boolkill/random.hpp"
#include "boolkill/text.hpp"

namespace boolkill {

struct Fact {
  std::string id;
  std::string text;
  Truth truth = Truth::True;

  friend bool operator==(const Fact&, const Fact&) = default;
};

enum class CorpusFormat { Tsv, Jsonl };

inline CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "tsv") return CorpusFormat::Tsv;
  if (s == "jsonl") return CorpusFormat::Jsonl;
  throw ConfigError("unknown corpus format \"" + std::string(s) + "\" (expected tsv or jsonl)");
}

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline Truth entailment_truth(std::string_view label, const std::string& where) {
  const std::string l = lowercase(trim(label));
  if (l == "entail" || l == "entails") return Truth::True;
  if (l == "not-entail" || l == "not entail" || l == "neutral") return Truth::False;
  throw DataError(where + ": unknown label \"" + std::string(label) + "\"");
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::string json_field(const nlohmann::json& obj, std::initializer_list<const char*> names,
                              const std::string& where) {
  for (const char* name : names) {
    auto it = obj.find(name);
    if (it != obj.end()) {
      if (!it->is_string()) throw DataError(where + ": field \"" + name + "\" is not a string");
      return it->get<std::string>();
    }
  }
  throw DataError(where + ": missing field \"" + std::string(*names.begin()) + "\"");
}

}  // namespace detail

// Reads premise/hypothesis/label records and turns each into a Fact whose
// text is the joined pair. Ids are "{file-stem}-{line}" with 1-based line
// numbers; blank lines are skipped but still counted.
inline std::vector<Fact> load_entailment_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read corpus " + path.string());

  const std::string stem = path.stem().string();
  std::vector<Fact> facts;
  std::string line;
  std::size_t row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const std::string where = path.filename().string() + " row " + std::to_string(row);

    std::string premise, hypothesis, label;
    if (format == CorpusFormat::Tsv) {
      const auto fields = detail::split_tabs(line);
      if (fields.size() != 3) {
        throw DataError(where + ": expected 3 tab-separated fields, found " + std::to_string(fields.size()));
      }
      if (first && detail::lowercase(fields[2]) == "label") {
        first = false;
        continue;
      }
      premise = fields[0];
      hypothesis = fields[1];
      label = fields[2];
    } else {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(where + ": " + e.what());
      }
      if (!obj.is_object()) throw DataError(where + ": record is not an object");
      premise = detail::json_field(obj, {"premise", "sentence1"}, where);
      hypothesis = detail::json_field(obj, {"hypothesis", "sentence2"}, where);
      label = detail::json_field(obj, {"label", "gold_label"}, where);
    }
    first = false;

    if (detail::trim(premise).empty()) throw DataError(where + ": empty premise");
    if (detail::trim(hypothesis).empty()) throw DataError(where + ": empty hypothesis");
    const Truth truth = detail::entailment_truth(label, where);
    std::string text;
    try {
      text = join_fact(premise, hypothesis);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    facts.push_back(Fact{stem + "-" + std::to_string(row), std::move(text), truth});
  }
  return facts;
}

inline void check_unique_ids(const std::vector<Fact>& facts) {
  std::unordered_set<std::string_view> seen;
  for (const auto& f : facts) {
    if (!seen.insert(f.id).second) throw DataError("duplicate fact id \"" + f.id + "\"");
  }
}

inline std::size_t count_truth(const std::vector<Fact>& facts, Truth t) {
  return static_cast<std::size_t>(
      std::count_if(facts.begin(), facts.end(), [t](const Fact& f) { return f.truth == t; }));
}

struct BalancedFacts {
  std::vector<Fact> facts;
  std::size_t dropped = 0;
};

// Subsamples the larger class down to the size of the smaller one. The
// survivors keep their input order.
inline BalancedFacts balance_classes(const std::vector<Fact>& facts, std::uint64_t seed) {
  const std::size_t n_true = count_truth(facts, Truth::True);
  const std::size_t n_false = facts.size() - n_true;
  if (n_true == n_false) return {facts, 0};

  const Truth majority = n_true > n_false ? Truth::True : Truth::False;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i].truth == majority) pool.push_back(i);
  }
  Rng rng(derive_seed(seed, "ingest", "balance"));
  rng.shuffle(pool);
  const std::size_t drop = std::max(n_true, n_false) - std::min(n_true, n_false);
  std::vector<bool> removed(facts.size(), false);
  for (std::size_t i = 0; i < drop; ++i) removed[pool[i]] = true;

  BalancedFacts out;
  out.dropped = drop;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (!removed[i]) out.facts.push_back(facts[i]);
  }
  return out;
}

struct FactSplit {
  std::vector<Fact> train;
  std::vector<Fact> test;
};

// Seeded, class-balanced train/test partition. The test set holds
// test_count/2 facts of each truth value (the odd one goes to the larger
// class); both partitions keep input order.
inline FactSplit split(const std::vector<Fact>& facts, std::size_t test_count, std::uint64_t seed) {
  if (test_count == 0 || test_count >= facts.size()) {
    throw ConfigError("test count must be in [1, " + std::to_string(facts.size()) + "), got " +
                      std::to_string(test_count));
  }
  check_unique_ids(facts);

  const std::size_t n_true = count_truth(facts, Truth::True);
  const std::size_t n_false = facts.size() - n_true;
  std::size_t want_true = test_count / 2;
  std::size_t want_false = test_count / 2;
  if (test_count % 2 == 1) (n_true >= n_false ? want_true : want_false) += 1;
  if (n_true < want_true) {
    throw ConfigError("test split needs " + std::to_string(want_true) + " true facts, only " +
                      std::to_string(n_true) + " available");
  }
  if (n_false < want_false) {
    throw ConfigError("test split needs " + std::to_string(want_false) + " false facts, only " +
                      std::to_string(n_false) + " available");
  }

  std::vector<std::size_t> order(facts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "ingest", "split"));
  rng.shuffle(order);

  std::vector<bool> in_test(facts.size(), false);
  for (std::size_t i : order) {
    std::size_t& want = facts[i].truth == Truth::True ? want_true : want_false;
    if (want > 0) {
      --want;
      in_test[i] = true;
    }
  }

  FactSplit out;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    (in_test[i] ? out.test : out.train).push_back(facts[i]);
  }
  return out;
}

}  // namespace boolkill
