#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "boolkill/builder.hpp"
#include "boolkill/error.hpp"
#include "boolkill/logic.hpp"
#include "boolkill/random.hpp"
#include "boolkill/text.hpp"

namespace boolkill {

struct PredictionRecord {
  std::string sample_id;
  Truth predicted = Truth::True;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// Raised when no augmented sample has a correctly classified base fact, so
// boolean accuracy is undefined.
class EmptyQualifyingError : public DataError {
 public:
  EmptyQualifyingError()
      : DataError("boolean accuracy undefined: no augmented sample has a correctly predicted base sample") {}
};

namespace detail {

// Predictions aligned with dataset order. Every sample needs exactly one
// prediction and every prediction must name a sample.
inline std::vector<Truth> align_predictions(const std::vector<PredictionRecord>& preds, const Dataset& dataset,
                                            std::string_view what) {
  std::unordered_map<std::string_view, std::size_t> pos;
  pos.reserve(dataset.samples.size());
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) pos.emplace(dataset.samples[i].id, i);
  std::vector<std::optional<Truth>> slot(dataset.samples.size());
  for (const auto& p : preds) {
    auto it = pos.find(p.sample_id);
    if (it == pos.end()) throw DataError(std::string(what) + ": prediction for unknown sample " + p.sample_id);
    if (slot[it->second]) throw DataError(std::string(what) + ": duplicate prediction for " + p.sample_id);
    slot[it->second] = p.predicted;
  }
  std::vector<Truth> out;
  out.reserve(slot.size());
  for (std::size_t i = 0; i < slot.size(); ++i) {
    if (!slot[i]) throw DataError(std::string(what) + ": missing prediction for " + dataset.samples[i].id);
    out.push_back(*slot[i]);
  }
  return out;
}

// For each augmented sample: was its base sample predicted correctly?
inline std::vector<bool> base_correct(const Dataset& aug, const std::vector<PredictionRecord>& preds_base,
                                      const Dataset& base) {
  const auto base_pred = align_predictions(preds_base, base, "base predictions");
  std::unordered_map<std::string_view, bool> correct;
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    correct.emplace(base.samples[i].id, base_pred[i] == base.samples[i].label);
  }
  std::vector<bool> out;
  out.reserve(aug.samples.size());
  for (const auto& s : aug.samples) {
    auto it = correct.find(s.base_id);
    if (it == correct.end()) throw DataError("sample " + s.id + ": base sample " + s.base_id + " not found");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace detail

inline double clean_accuracy(const std::vector<PredictionRecord>& preds, const Dataset& dataset) {
  if (dataset.samples.empty()) throw DataError("cannot score an empty dataset");
  const auto pred = detail::align_predictions(preds, dataset, "predictions");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == dataset.samples[i].label;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

struct BooleanAccuracy {
  double accuracy = 0.0;
  std::size_t qualifying = 0;
};

// Accuracy on augmented samples whose base (k = 0) sample the model got
// right.
inline BooleanAccuracy boolean_accuracy(const std::vector<PredictionRecord>& preds_aug, const Dataset& aug,
                                        const std::vector<PredictionRecord>& preds_base, const Dataset& base) {
  const auto pred = detail::align_predictions(preds_aug, aug, "augmented predictions");
  const auto qualifies = detail::base_correct(aug, preds_base, base);
  std::size_t qualifying = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!qualifies[i]) continue;
    ++qualifying;
    hits += pred[i] == aug.samples[i].label;
  }
  if (qualifying == 0) throw EmptyQualifyingError();
  return {static_cast<double>(hits) / static_cast<double>(qualifying), qualifying};
}

struct DepthResult {
  std::size_t total = 0;
  std::size_t qualifying = 0;
  // Absent when no sample at this depth qualifies.
  std::optional<double> boolean_accuracy;
};

inline std::map<std::size_t, DepthResult> per_k_breakdown(const std::vector<PredictionRecord>& preds_aug,
                                                          const Dataset& aug,
                                                          const std::vector<PredictionRecord>& preds_base,
                                                          const Dataset& base) {
  const auto pred = detail::align_predictions(preds_aug, aug, "augmented predictions");
  const auto qualifies = detail::base_correct(aug, preds_base, base);
  std::map<std::size_t, DepthResult> out;
  std::map<std::size_t, std::size_t> hits;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    auto& r = out[aug.samples[i].k];
    ++r.total;
    if (!qualifies[i]) continue;
    ++r.qualifying;
    hits[aug.samples[i].k] += pred[i] == aug.samples[i].label;
  }
  for (auto& [k, r] : out) {
    if (r.qualifying > 0) r.boolean_accuracy = static_cast<double>(hits[k]) / static_cast<double>(r.qualifying);
  }
  return out;
}

inline std::string per_k_csv(const std::map<std::size_t, DepthResult>& per_k) {
  std::string out = "k,total,qualifying,boolean_accuracy\n";
  for (const auto& [k, r] : per_k) {
    out += std::to_string(k) + "," + std::to_string(r.total) + "," + std::to_string(r.qualifying) + ",";
    if (r.boolean_accuracy) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *r.boolean_accuracy);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

struct MetricsReport {
  double clean_accuracy = 0.0;  // on the base dataset
  double augmented_clean_accuracy = 0.0;
  double boolean_accuracy = 0.0;
  std::size_t qualifying_count = 0;
  std::size_t dataset_size = 0;
  std::map<std::size_t, DepthResult> per_k;
};

inline MetricsReport score(const std::vector<PredictionRecord>& preds_aug, const Dataset& aug,
                           const std::vector<PredictionRecord>& preds_base, const Dataset& base) {
  MetricsReport r;
  r.clean_accuracy = clean_accuracy(preds_base, base);
  r.augmented_clean_accuracy = clean_accuracy(preds_aug, aug);
  const auto b = boolean_accuracy(preds_aug, aug, preds_base, base);
  r.boolean_accuracy = b.accuracy;
  r.qualifying_count = b.qualifying;
  r.dataset_size = aug.samples.size();
  r.per_k = per_k_breakdown(preds_aug, aug, preds_base, base);
  return r;
}

// ---------------------------------------------------------------------------
// Chain-of-thought traces

struct Claim {
  std::size_t index = 0;
  Truth value = Truth::True;
};

struct Trace {
  std::string sample_id;
  std::vector<Claim> claimed;
  Truth final_claim = Truth::True;
};

struct StepVerdict {
  std::size_t index = 0;
  Truth claimed = Truth::True;
  Truth expected = Truth::True;
  bool consistent = true;
};

struct TraceVerdict {
  std::string sample_id;
  std::vector<StepVerdict> steps;
  std::optional<std::size_t> first_inconsistent;
  bool final_consistent = true;
  Truth expected_final = Truth::True;
};

// The fact's truth is not part of the text. When `fact_truth` is not given
// it is recovered from the sample label, which works whenever the answer
// depends on the fact.
inline TraceVerdict check_trace(const Sample& sample, const Trace& trace,
                                std::optional<Truth> fact_truth = std::nullopt) {
  ParsedSample parsed;
  try {
    parsed = parse(sample.text);
  } catch (const ParseError& e) {
    throw DataError("sample " + sample.id + ": " + e.what());
  }

  auto values_for = [&](Truth t0) {
    std::vector<Truth> v{t0};
    const auto rest = eval_trace(Chain{t0, parsed.statements});
    v.insert(v.end(), rest.begin(), rest.end());
    return v;
  };
  if (!fact_truth) {
    const bool fits_true = values_for(Truth::True)[parsed.question_index] == sample.label;
    const bool fits_false = values_for(Truth::False)[parsed.question_index] == sample.label;
    if (fits_true && fits_false) {
      throw DataError("sample " + sample.id + ": answer does not depend on the fact; fact truth needed");
    }
    if (!fits_true && !fits_false) throw DataError("sample " + sample.id + ": label contradicts its statements");
    fact_truth = fits_true ? Truth::True : Truth::False;
  }
  const auto truth = values_for(*fact_truth);

  TraceVerdict v;
  v.sample_id = sample.id;
  std::optional<std::size_t> prev;
  for (const auto& c : trace.claimed) {
    if (c.index >= truth.size()) {
      throw DataError("trace for " + sample.id + ": S" + std::to_string(c.index) + " is out of range");
    }
    if (prev && c.index <= *prev) {
      throw DataError("trace for " + sample.id + ": claim indices must be strictly increasing");
    }
    prev = c.index;
    const bool ok = c.value == truth[c.index];
    v.steps.push_back({c.index, c.value, truth[c.index], ok});
    if (!ok && !v.first_inconsistent) v.first_inconsistent = c.index;
  }
  v.expected_final = truth[parsed.question_index];
  v.final_consistent = trace.final_claim == v.expected_final;
  return v;
}

// ---------------------------------------------------------------------------
// Reference agents. They read the ground truth on purpose: they exist to
// validate the scoring harness and to reproduce shortcut behaviour.

enum class AgentKind { Oracle, DepthLimited, TokenCount, ConnectiveBias, Majority };

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

struct Agent {
  AgentKind kind = AgentKind::Oracle;
  std::size_t depth = kUnlimitedDepth;  // DepthLimited only
  std::uint64_t seed = kDefaultSeed;
};

constexpr std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::Oracle:
      return "oracle";
    case AgentKind::DepthLimited:
      return "depth-limited";
    case AgentKind::TokenCount:
      return "token-count";
    case AgentKind::ConnectiveBias:
      return "connective-bias";
    case AgentKind::Majority:
      return "majority";
  }
  return "";
}

inline AgentKind parse_agent_kind(std::string_view s) {
  for (auto k : {AgentKind::Oracle, AgentKind::DepthLimited, AgentKind::TokenCount, AgentKind::ConnectiveBias,
                 AgentKind::Majority}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown agent \"" + std::string(s) + "\"");
}

inline std::vector<PredictionRecord> run_agent(const Agent& agent, const Dataset& dataset) {
  auto coin = [&](std::string_view id) {
    return from_bool(Rng(derive_seed(agent.seed, "agent", to_string(agent.kind), id)).coin());
  };

  Truth majority = Truth::True;
  if (agent.kind == AgentKind::Majority) {
    std::size_t n_true = 0;
    for (const auto& s : dataset.samples) n_true += s.label == Truth::True;
    const std::size_t n_false = dataset.samples.size() - n_true;
    majority = n_true == n_false ? coin("") : (n_true > n_false ? Truth::True : Truth::False);
  }

  std::vector<PredictionRecord> out;
  out.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    try {
      parse(s.text);
    } catch (const ParseError& e) {
      throw DataError("sample " + s.id + ": " + e.what());
    }
    Truth p = Truth::True;
    switch (agent.kind) {
      case AgentKind::Oracle:
        p = s.label;
        break;
      case AgentKind::DepthLimited:
        p = s.k <= agent.depth ? s.label : coin(s.id);
        break;
      case AgentKind::TokenCount: {
        const auto t = count_word(s.text, "true");
        const auto f = count_word(s.text, "false");
        p = t > f ? Truth::True : (t < f ? Truth::False : coin(s.id));
        break;
      }
      case AgentKind::ConnectiveBias:
        if (count_word(s.text, "both") > 0) {
          p = Truth::False;
        } else if (count_word(s.text, "either") > 0) {
          p = Truth::True;
        } else {
          p = coin(s.id);
        }
        break;
      case AgentKind::Majority:
        p = majority;
        break;
    }
    out.push_back({s.id, p});
  }
  return out;
}

}  // namespace boolkill
