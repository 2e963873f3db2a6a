#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "boolkill/builder.hpp"
#include "boolkill/error.hpp"
#include "boolkill/io.hpp"
#include "boolkill/random.hpp"

namespace boolkill {

enum class ScheduleKind { Clr, Naive, NoReuse, Skip };

constexpr std::string_view to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::Clr:
      return "clr";
    case ScheduleKind::Naive:
      return "naive";
    case ScheduleKind::NoReuse:
      return "no-reuse";
    case ScheduleKind::Skip:
      return "skip";
  }
  return "";
}

inline ScheduleKind parse_schedule_kind(std::string_view s) {
  if (s == "clr") return ScheduleKind::Clr;
  if (s == "naive") return ScheduleKind::Naive;
  if (s == "no-reuse") return ScheduleKind::NoReuse;
  if (s == "skip") return ScheduleKind::Skip;
  throw ConfigError("unknown schedule kind \"" + std::string(s) + "\" (expected clr, naive, no-reuse or skip)");
}

// A slice of a level's dataset: a balanced subset generated for `spec` with
// round(scale * |facts| * per_fact) samples. Parts are keyed by spec, so a
// part shared by two levels yields the same samples in both.
struct DatasetPart {
  SubsetSpec spec;
  double scale = 1.0;

  friend bool operator==(const DatasetPart&, const DatasetPart&) = default;
};

struct Level {
  std::string name;
  std::string dataset_ref;
  std::vector<DatasetPart> parts;
  std::size_t steps = 1;
  std::size_t batch_size = 1;

  friend bool operator==(const Level&, const Level&) = default;
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::Clr;
  std::vector<Level> levels;
  bool inherit_weights = true;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_budget(std::size_t steps, std::size_t batch) {
  if (steps == 0) throw ConfigError("steps must be at least 1");
  if (batch == 0) throw ConfigError("batch size must be at least 1");
}

inline std::string level_ref(std::size_t index, const std::string& name) {
  return "level" + std::to_string(index + 1) + "_" + name;
}

inline std::size_t range_size(std::size_t lo, std::size_t hi) { return hi - lo + 1; }

// Spec covering [lo, hi]; ranges too shallow for a connective fall back to
// NOT-only, which is what not-and-or generation produces there anyway.
inline SubsetSpec range_spec(std::size_t lo, std::size_t hi, const SubsetSpec& like) {
  SubsetSpec s = like;
  s.k_min = lo;
  s.k_max = hi;
  if (hi < 2) s.mode = Mode::NotOnly;
  return s;
}

inline double total_scale(const std::vector<DatasetPart>& parts) {
  double sum = 0.0;
  for (const auto& p : parts) sum += p.scale;
  return sum;
}

inline std::vector<Level> cumulative_levels(const std::vector<SubsetSpec>& specs, std::size_t steps, std::size_t batch) {
  if (specs.empty()) throw ConfigError("a curriculum needs at least one level");
  check_budget(steps, batch);
  for (const auto& s : specs) s.validate();

  std::vector<Level> levels;
  std::vector<DatasetPart> parts{{specs[0], 1.0}};
  levels.push_back({specs[0].name(), level_ref(0, specs[0].name()), parts, steps, batch});
  for (std::size_t n = 1; n < specs.size(); ++n) {
    const auto& prev = specs[n - 1];
    const auto& cur = specs[n];
    const std::string pair = "level " + std::to_string(n + 1) + " (" + cur.name() + ") after level " +
                             std::to_string(n) + " (" + prev.name() + ")";
    if (cur.k_max < prev.k_max) throw ConfigError(pair + ": difficulty decreases");
    if (cur.k_min > prev.k_min) throw ConfigError(pair + ": range does not include the previous one");
    if (cur.mode == Mode::NotOnly && prev.mode == Mode::NotAndOr) {
      throw ConfigError(pair + ": drops the connectives of the previous level");
    }

    const double mass = total_scale(parts);
    const double per_depth = mass / static_cast<double>(range_size(prev.k_min, prev.k_max));
    if (cur.mode != prev.mode) {
      // New statement kinds across the whole range, as much again as before.
      parts.push_back({range_spec(cur.k_min, cur.k_max, cur),
                       per_depth * static_cast<double>(range_size(cur.k_min, cur.k_max))});
    } else {
      if (cur.k_min < prev.k_min) {
        parts.push_back({range_spec(cur.k_min, prev.k_min - 1, cur),
                         per_depth * static_cast<double>(prev.k_min - cur.k_min)});
      }
      if (cur.k_max > prev.k_max) {
        parts.push_back({range_spec(prev.k_max + 1, cur.k_max, cur),
                         per_depth * static_cast<double>(cur.k_max - prev.k_max)});
      }
    }
    levels.push_back({cur.name(), level_ref(n, cur.name()), parts, steps, batch});
  }
  return levels;
}

}  // namespace detail

// Easy-to-hard levels where each level's range contains the previous one.
// Level n's dataset is level n-1's dataset plus freshly generated samples
// for the added depths, sized so depths stay uniform within the level.
inline Schedule make_clr(const std::vector<SubsetSpec>& levels, std::size_t steps, std::size_t batch,
                         std::uint64_t seed) {
  return Schedule{ScheduleKind::Clr, detail::cumulative_levels(levels, steps, batch), true, seed};
}

// CLR that leaves out intermediate levels (e.g. u0-1 -> u0-3). At least one
// step must raise k_max by more than one.
inline Schedule make_skip(const std::vector<SubsetSpec>& levels, std::size_t steps, std::size_t batch,
                          std::uint64_t seed) {
  Schedule s{ScheduleKind::Skip, detail::cumulative_levels(levels, steps, batch), true, seed};
  bool leap = false;
  for (std::size_t n = 1; n < levels.size(); ++n) leap = leap || levels[n].k_max > levels[n - 1].k_max + 1;
  if (!leap) throw ConfigError("skip schedule has no level that leaps over a depth; use clr");
  return s;
}

// All training sets merged into one level, sampled uniformly.
inline Schedule make_naive(const std::vector<SubsetSpec>& specs, std::size_t steps, std::size_t batch,
                           std::uint64_t seed) {
  if (specs.empty()) throw ConfigError("naive schedule needs at least one training set");
  detail::check_budget(steps, batch);
  Level level;
  std::unordered_set<std::string> names;
  for (const auto& s : specs) {
    s.validate();
    if (!names.insert(s.name()).second) throw ConfigError("training set " + s.name() + " listed twice");
    if (!level.name.empty()) level.name += ",";
    level.name += s.name();
    level.parts.push_back({s, 1.0});
  }
  level.dataset_ref = detail::level_ref(0, specs.size() == 1 ? level.name : "merged");
  level.steps = steps;
  level.batch_size = batch;
  return Schedule{ScheduleKind::Naive, {level}, false, seed};
}

// Ablation without reuse: the base level, then single-depth levels only.
inline Schedule make_no_reuse(const SubsetSpec& base, const std::vector<std::size_t>& singleton_ks,
                              std::size_t steps, std::size_t batch, std::uint64_t seed) {
  base.validate();
  detail::check_budget(steps, batch);
  for (std::size_t i = 1; i < singleton_ks.size(); ++i) {
    if (singleton_ks[i] <= singleton_ks[i - 1]) {
      throw ConfigError("singleton depths must be strictly increasing: " + std::to_string(singleton_ks[i - 1]) +
                        " then " + std::to_string(singleton_ks[i]));
    }
  }
  Schedule s{ScheduleKind::NoReuse, {}, true, seed};
  s.levels.push_back({base.name(), detail::level_ref(0, base.name()), {{base, 1.0}}, steps, batch});
  for (std::size_t k : singleton_ks) {
    const SubsetSpec spec = detail::range_spec(k, k, base);
    spec.validate();
    s.levels.push_back({spec.name(), detail::level_ref(s.levels.size(), spec.name()), {{spec, 1.0}}, steps, batch});
  }
  return s;
}

// Generates every level's dataset. Shared parts are generated once.
inline std::map<std::string, Dataset> materialize(const Schedule& schedule, const std::vector<Fact>& facts) {
  std::map<std::string, Dataset> part_cache;
  std::map<std::string, Dataset> out;
  for (const auto& level : schedule.levels) {
    Dataset merged;
    merged.spec = level.parts.empty() ? SubsetSpec{} : level.parts.front().spec;
    merged.seed = schedule.seed;
    std::unordered_set<std::string> ids;
    for (const auto& part : level.parts) {
      const std::string key = part.spec.name() + "@" + std::to_string(part.scale);
      auto it = part_cache.find(key);
      if (it == part_cache.end()) {
        GenerateOptions opts;
        const double want = part.scale * static_cast<double>(facts.size() * part.spec.per_fact);
        opts.target = static_cast<std::size_t>(std::llround(want));
        opts.max_rounds = 8 + 2 * static_cast<std::size_t>(std::ceil(part.scale));
        it = part_cache.emplace(key, generate(facts, part.spec, schedule.seed, opts)).first;
      }
      for (const auto& s : it->second.samples) {
        if (!ids.insert(s.id).second) throw DataError("level " + level.name + " holds sample " + s.id + " twice");
        merged.samples.push_back(s);
      }
      merged.spec.k_min = std::min(merged.spec.k_min, part.spec.k_min);
      merged.spec.k_max = std::max(merged.spec.k_max, part.spec.k_max);
      if (part.spec.mode == Mode::NotAndOr) merged.spec.mode = Mode::NotAndOr;
    }
    merged.balance = audit(merged);
    out.emplace(level.dataset_ref, std::move(merged));
  }
  return out;
}

struct LevelStream {
  std::string name;
  std::string dataset_ref;
  std::size_t steps = 0;
  std::size_t batch_size = 0;
  std::string dataset_sha256;
  std::vector<std::string> ids;
};

struct TrainingManifest {
  std::vector<LevelStream> levels;
};

// Per level, steps * batch sample ids. The stream walks through seeded
// permutations of the level's dataset, reshuffling at each pass, so every id
// appears floor(len / |dataset|) or one more times.
inline TrainingManifest emit_manifest(const Schedule& schedule, const std::map<std::string, Dataset>& datasets,
                                      std::uint64_t seed) {
  TrainingManifest m;
  for (std::size_t li = 0; li < schedule.levels.size(); ++li) {
    const auto& level = schedule.levels[li];
    auto it = datasets.find(level.dataset_ref);
    if (it == datasets.end()) throw DataError("no dataset for level " + level.name + " (" + level.dataset_ref + ")");
    const auto& samples = it->second.samples;
    if (samples.empty()) throw DataError("dataset " + level.dataset_ref + " is empty");

    LevelStream stream{level.name, level.dataset_ref, level.steps, level.batch_size, dataset_digest(it->second), {}};
    const std::size_t length = level.steps * level.batch_size;
    stream.ids.reserve(length);
    std::vector<std::size_t> order(samples.size());
    for (std::uint64_t pass = 0; stream.ids.size() < length; ++pass) {
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      Rng rng(derive_seed(seed, "manifest", static_cast<std::uint64_t>(li), pass));
      rng.shuffle(order);
      for (std::size_t i = 0; i < order.size() && stream.ids.size() < length; ++i) {
        stream.ids.push_back(samples[order[i]].id);
      }
    }
    m.levels.push_back(std::move(stream));
  }
  return m;
}

// Text form: per level a header line, then one id per line.
//   # level u0-2 steps=3000 batch=16 dataset=level2_u0-2 sha256=<hex>
inline std::string serialize_manifest(const TrainingManifest& m) {
  std::string out;
  for (const auto& l : m.levels) {
    out += "# level " + l.name + " steps=" + std::to_string(l.steps) + " batch=" + std::to_string(l.batch_size) +
           " dataset=" + l.dataset_ref + " sha256=" + l.dataset_sha256 + "\n";
    for (const auto& id : l.ids) {
      out += id;
      out += '\n';
    }
  }
  return out;
}

inline ordered_json schedule_json(const Schedule& s) {
  ordered_json j;
  j["kind"] = to_string(s.kind);
  j["inherit_weights"] = s.inherit_weights;
  j["seed"] = s.seed;
  j["levels"] = ordered_json::array();
  for (const auto& l : s.levels) {
    ordered_json lj;
    lj["name"] = l.name;
    lj["dataset"] = l.dataset_ref;
    lj["steps"] = l.steps;
    lj["batch_size"] = l.batch_size;
    lj["parts"] = ordered_json::array();
    for (const auto& p : l.parts) {
      ordered_json pj = spec_json(p.spec);
      pj["scale"] = p.scale;
      lj["parts"].push_back(pj);
    }
    j["levels"].push_back(lj);
  }
  return j;
}

}  // namespace boolkill
