#pragma once

// Batch commands behind the command-line tool. Each command takes a fully
// resolved config, writes its artifacts plus a "*.run.json" manifest (the
// config echoed back and the sha256 of every output) into its output
// directory, and returns a human-readable summary.
//
// Seeds: a command's root seed is handed to the modules unchanged; each
// module folds in its own label and then per-record labels (see
// derive_seed), e.g. builder: (root, "builder", subset, fact id, replica).

#include <charconv>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "boolkill/builder.hpp"
#include "boolkill/curriculum.hpp"
#include "boolkill/evalkit.hpp"
#include "boolkill/ingest.hpp"
#include "boolkill/io.hpp"
#include "boolkill/records.hpp"

namespace boolkill {

namespace fs = std::filesystem;

namespace detail {

inline void write_run_manifest(const fs::path& file, std::string_view command, const ordered_json& config,
                               const std::vector<fs::path>& outputs) {
  ordered_json j;
  j["command"] = command;
  j["config"] = config;
  ordered_json hashes = ordered_json::object();
  for (const auto& p : outputs) hashes[p.filename().string()] = sha256_hex(read_file(p));
  j["outputs"] = hashes;
  write_file(file, j.dump(2) + "\n");
}

inline std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * x);
  return buf;
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError("bad " + std::string(what) + " \"" + std::string(s) + "\"");
  }
  return v;
}

}  // namespace detail

// "1-4" or "3" with the default mode, or "u0-2" / "ut0-4" naming the mode.
inline SubsetSpec parse_subset(std::string_view token, Mode default_mode, std::size_t per_fact = 1) {
  SubsetSpec s;
  s.mode = default_mode;
  s.per_fact = per_fact;
  if (token.starts_with("ut")) {
    s.mode = Mode::NotAndOr;
    token.remove_prefix(2);
  } else if (token.starts_with("u")) {
    s.mode = Mode::NotOnly;
    token.remove_prefix(1);
  }
  const auto dash = token.find('-');
  if (dash == std::string_view::npos) {
    s.k_min = s.k_max = detail::parse_count(token, "depth");
  } else {
    s.k_min = detail::parse_count(token.substr(0, dash), "depth");
    s.k_max = detail::parse_count(token.substr(dash + 1), "depth");
  }
  s.validate();
  return s;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    auto item = detail::trim(s.substr(start, comma - start));
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct IngestConfig {
  fs::path raw;
  CorpusFormat format = CorpusFormat::Tsv;
  fs::path out;
  std::size_t test_count = 1000;
  std::uint64_t seed = kDefaultSeed;
  bool balance = true;
};

inline std::string cmd_ingest(const IngestConfig& cfg) {
  auto facts = load_entailment_corpus(cfg.raw, cfg.format);
  check_unique_ids(facts);
  const std::size_t loaded = facts.size();
  std::size_t dropped = 0;
  if (cfg.balance) {
    auto b = balance_classes(facts, cfg.seed);
    facts = std::move(b.facts);
    dropped = b.dropped;
  }
  const auto parts = split(facts, cfg.test_count, cfg.seed);
  const fs::path train = cfg.out / "train.facts.jsonl";
  const fs::path test = cfg.out / "test.facts.jsonl";
  write_file(train, serialize_facts(parts.train));
  write_file(test, serialize_facts(parts.test));

  ordered_json config;
  config["raw"] = cfg.raw.string();
  config["format"] = cfg.format == CorpusFormat::Tsv ? "tsv" : "jsonl";
  config["out"] = cfg.out.string();
  config["test_count"] = cfg.test_count;
  config["seed"] = cfg.seed;
  config["balance"] = cfg.balance;
  config["loaded"] = loaded;
  config["dropped_for_balance"] = dropped;
  detail::write_run_manifest(cfg.out / "ingest.run.json", "ingest", config, {train, test});

  std::ostringstream ss;
  ss << "loaded " << loaded << " facts";
  if (cfg.balance) ss << ", dropped " << dropped << " to balance classes";
  ss << "\ntrain: " << parts.train.size() << " facts -> " << train.string() << "\ntest:  " << parts.test.size()
     << " facts -> " << test.string() << "\n";
  return ss.str();
}

// ---------------------------------------------------------------------------

struct GenerateConfig {
  fs::path facts;
  SubsetSpec spec;
  std::uint64_t seed = kDefaultSeed;
  // Output name prefix; defaults to the facts file name up to its first dot.
  std::string split;
  fs::path out;
  std::optional<std::size_t> target;
  std::size_t max_rounds = 8;
};

inline std::string default_split(const fs::path& facts_path) {
  const std::string name = facts_path.filename().string();
  return name.substr(0, name.find('.'));
}

inline std::string cmd_generate(const GenerateConfig& cfg) {
  cfg.spec.validate();
  const auto facts = read_facts(cfg.facts);
  GenerateOptions opts;
  opts.target = cfg.target;
  opts.max_rounds = cfg.max_rounds;
  const auto dataset = generate(facts, cfg.spec, cfg.seed, opts);
  const std::string split = cfg.split.empty() ? default_split(cfg.facts) : cfg.split;
  const std::string stem = dataset_file_stem(split, cfg.spec);
  const auto written = write_dataset(cfg.out, stem, dataset);

  ordered_json config;
  config["facts"] = cfg.facts.string();
  config["spec"] = spec_json(cfg.spec);
  config["seed"] = cfg.seed;
  config["split"] = split;
  config["out"] = cfg.out.string();
  config["target"] = cfg.target ? ordered_json(*cfg.target) : ordered_json(nullptr);
  config["max_rounds"] = cfg.max_rounds;
  detail::write_run_manifest(cfg.out / (stem + ".run.json"), "generate", config, {written.data, written.sidecar});

  const auto& r = dataset.balance;
  std::ostringstream ss;
  ss << cfg.spec.name() << ": " << r.total << " samples (" << r.n_true << " true / " << r.n_false << " false), mean "
     << r.mean_tokens << " tokens -> " << written.data.string() << "\n";
  ss << "audit: " << (r.ok() ? "ok" : "VIOLATIONS") << "\n";
  for (const auto& v : r.violations) ss << "  " << v << "\n";
  return ss.str();
}

// ---------------------------------------------------------------------------

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::Clr;
  fs::path facts;
  std::vector<SubsetSpec> levels;  // clr, skip, naive
  SubsetSpec base;                 // no-reuse
  std::vector<std::size_t> ks;     // no-reuse
  std::size_t steps = 3000;
  std::size_t batch = 16;
  std::uint64_t seed = kDefaultSeed;
  fs::path out;
};

inline Schedule build_schedule(const ScheduleConfig& cfg) {
  switch (cfg.kind) {
    case ScheduleKind::Clr:
      return make_clr(cfg.levels, cfg.steps, cfg.batch, cfg.seed);
    case ScheduleKind::Skip:
      return make_skip(cfg.levels, cfg.steps, cfg.batch, cfg.seed);
    case ScheduleKind::Naive:
      return make_naive(cfg.levels, cfg.steps, cfg.batch, cfg.seed);
    case ScheduleKind::NoReuse:
      return make_no_reuse(cfg.base, cfg.ks, cfg.steps, cfg.batch, cfg.seed);
  }
  throw ConfigError("unknown schedule kind");
}

inline std::string cmd_schedule(const ScheduleConfig& cfg) {
  const Schedule schedule = build_schedule(cfg);
  const auto facts = read_facts(cfg.facts);
  const auto datasets = materialize(schedule, facts);
  const auto manifest = emit_manifest(schedule, datasets, cfg.seed);

  std::vector<fs::path> outputs;
  for (const auto& [ref, ds] : datasets) {
    const auto w = write_dataset(cfg.out / "datasets", ref, ds);
    outputs.push_back(w.data);
    outputs.push_back(w.sidecar);
  }
  const fs::path schedule_file = cfg.out / "schedule.json";
  const fs::path manifest_file = cfg.out / "manifest.txt";
  write_file(schedule_file, schedule_json(schedule).dump(2) + "\n");
  write_file(manifest_file, serialize_manifest(manifest));
  outputs.push_back(schedule_file);
  outputs.push_back(manifest_file);

  ordered_json config;
  config["kind"] = to_string(cfg.kind);
  config["facts"] = cfg.facts.string();
  config["levels"] = ordered_json::array();
  for (const auto& l : cfg.levels) config["levels"].push_back(spec_json(l));
  config["base"] = spec_json(cfg.base);
  config["ks"] = cfg.ks;
  config["steps"] = cfg.steps;
  config["batch"] = cfg.batch;
  config["seed"] = cfg.seed;
  config["out"] = cfg.out.string();
  detail::write_run_manifest(cfg.out / "schedule.run.json", "schedule", config, outputs);

  std::ostringstream ss;
  ss << to_string(schedule.kind) << " schedule, " << schedule.levels.size() << " level(s)"
     << (schedule.inherit_weights ? ", weights inherited between levels" : "") << "\n";
  for (const auto& l : schedule.levels) {
    ss << "  " << l.name << ": " << datasets.at(l.dataset_ref).samples.size() << " samples, " << l.steps
       << " steps x batch " << l.batch_size << "\n";
  }
  ss << "manifest -> " << manifest_file.string() << "\n";
  return ss.str();
}

// ---------------------------------------------------------------------------

struct ScoreConfig {
  fs::path dataset;
  fs::path base_dataset;
  fs::path preds;
  fs::path base_preds;
  fs::path out;
};

inline std::string cmd_score(const ScoreConfig& cfg) {
  const auto aug = read_dataset(cfg.dataset);
  const auto base = read_dataset(cfg.base_dataset);
  const auto report = score(read_predictions(cfg.preds), aug, read_predictions(cfg.base_preds), base);

  const fs::path report_file = cfg.out / "report.json";
  const fs::path csv_file = cfg.out / "per_k.csv";
  write_file(report_file, metrics_json(report).dump(2) + "\n");
  write_file(csv_file, per_k_csv(report.per_k));

  ordered_json config;
  config["dataset"] = cfg.dataset.string();
  config["base_dataset"] = cfg.base_dataset.string();
  config["preds"] = cfg.preds.string();
  config["base_preds"] = cfg.base_preds.string();
  config["out"] = cfg.out.string();
  detail::write_run_manifest(cfg.out / "score.run.json", "score", config, {report_file, csv_file});

  std::ostringstream ss;
  ss << "clean% " << detail::percent(report.clean_accuracy) << "  boolean% " << detail::percent(report.boolean_accuracy)
     << " over " << report.qualifying_count << " of " << report.dataset_size << " samples\n";
  for (const auto& [k, d] : report.per_k) {
    ss << "  k=" << k << ": " << (d.boolean_accuracy ? detail::percent(*d.boolean_accuracy) : std::string("n/a"))
       << " (" << d.qualifying << "/" << d.total << ")\n";
  }
  return ss.str();
}

// ---------------------------------------------------------------------------

struct AgentConfig {
  Agent agent;
  fs::path dataset;
  fs::path out;
};

inline fs::path prediction_file(const AgentConfig& cfg) {
  return cfg.out / (cfg.dataset.stem().string() + "." + std::string(to_string(cfg.agent.kind)) + ".preds.jsonl");
}

inline std::string cmd_agent(const AgentConfig& cfg) {
  if (cfg.agent.kind == AgentKind::DepthLimited && cfg.agent.depth == kUnlimitedDepth) {
    throw ConfigError("depth-limited agent needs --depth");
  }
  const auto dataset = read_dataset(cfg.dataset);
  const auto preds = run_agent(cfg.agent, dataset);
  const fs::path file = prediction_file(cfg);
  write_file(file, serialize_predictions(preds));

  ordered_json config;
  config["kind"] = to_string(cfg.agent.kind);
  config["depth"] = cfg.agent.kind == AgentKind::DepthLimited ? ordered_json(cfg.agent.depth) : ordered_json(nullptr);
  config["seed"] = cfg.agent.seed;
  config["dataset"] = cfg.dataset.string();
  config["out"] = cfg.out.string();
  auto run_file = file;
  run_file.replace_extension(".run.json");
  detail::write_run_manifest(run_file, "agent", config, {file});

  return std::string(to_string(cfg.agent.kind)) + ": " + std::to_string(preds.size()) + " predictions -> " +
         file.string() + "\n";
}

// ---------------------------------------------------------------------------

struct CotCheckConfig {
  fs::path dataset;
  fs::path traces;
  // Optional u0 companion; its labels give the fact truth when the answer
  // alone does not determine it.
  fs::path base_dataset;
  fs::path out;
};

inline std::string cmd_cot_check(const CotCheckConfig& cfg) {
  const auto dataset = read_dataset(cfg.dataset);
  const auto traces = read_traces(cfg.traces);
  std::unordered_map<std::string, Truth> base_truth;
  if (!cfg.base_dataset.empty()) {
    for (const auto& s : read_dataset(cfg.base_dataset).samples) base_truth.emplace(s.id, s.label);
  }
  std::unordered_map<std::string_view, const Sample*> by_id;
  for (const auto& s : dataset.samples) by_id.emplace(s.id, &s);

  ordered_json verdicts = ordered_json::array();
  std::size_t inconsistent = 0;
  std::size_t wrong_final = 0;
  std::ostringstream ss;
  for (const auto& t : traces) {
    auto it = by_id.find(t.sample_id);
    if (it == by_id.end()) throw DataError("trace names unknown sample " + t.sample_id);
    std::optional<Truth> fact;
    if (auto b = base_truth.find(it->second->base_id); b != base_truth.end()) fact = b->second;
    const auto v = check_trace(*it->second, t, fact);
    inconsistent += v.first_inconsistent.has_value();
    wrong_final += !v.final_consistent;
    if (v.first_inconsistent) ss << "  " << t.sample_id << ": first inconsistent step S" << *v.first_inconsistent << "\n";
    verdicts.push_back(verdict_json(v));
  }

  ordered_json report;
  report["traces"] = traces.size();
  report["with_inconsistent_step"] = inconsistent;
  report["wrong_final"] = wrong_final;
  report["verdicts"] = verdicts;
  const fs::path report_file = cfg.out / "trace_report.json";
  write_file(report_file, report.dump(2) + "\n");

  ordered_json config;
  config["dataset"] = cfg.dataset.string();
  config["traces"] = cfg.traces.string();
  config["base_dataset"] = cfg.base_dataset.empty() ? ordered_json(nullptr) : ordered_json(cfg.base_dataset.string());
  config["out"] = cfg.out.string();
  detail::write_run_manifest(cfg.out / "cot-check.run.json", "cot-check", config, {report_file});

  return std::to_string(traces.size()) + " traces, " + std::to_string(inconsistent) + " with an inconsistent step, " +
         std::to_string(wrong_final) + " with a wrong final answer\n" + ss.str();
}

}  // namespace boolkill
