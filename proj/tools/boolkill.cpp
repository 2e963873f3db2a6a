// Command-line entry point: ingest, generate, schedule, agent, score,
// cot-check. Exit status: 0 ok, 2 configuration error, 3 data error,
// 1 anything else.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "boolkill/boolkill.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace boolkill;

  CLI::App app{"Nested boolean logic datasets, curricula and scoring"};
  app.require_subcommand(1);

  // ingest
  IngestConfig ingest;
  std::string ingest_format = "tsv";
  bool no_balance = false;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert an entailment corpus into balanced train/test facts");
  ingest_cmd->add_option("raw", ingest.raw, "Corpus file (premise, hypothesis, label)")->required();
  ingest_cmd->add_option("--format", ingest_format, "tsv or jsonl")->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();
  ingest_cmd->add_option("--test-count", ingest.test_count, "Facts held out for testing")->capture_default_str();
  ingest_cmd->add_option("--seed", ingest.seed, "Root seed")->capture_default_str();
  ingest_cmd->add_flag("--no-balance", no_balance, "Keep the raw class ratio");

  // generate
  GenerateConfig gen;
  std::string gen_mode = "not";
  std::size_t gen_target = 0;
  auto* gen_cmd = app.add_subcommand("generate", "Build one balanced subset over a facts file");
  gen_cmd->add_option("--facts", gen.facts, "Facts file (*.facts.jsonl)")->required();
  gen_cmd->add_option("--k-min", gen.spec.k_min, "Fewest nested statements")->required();
  gen_cmd->add_option("--k-max", gen.spec.k_max, "Most nested statements")->required();
  gen_cmd->add_option("--mode", gen_mode, "not or not-and-or")->capture_default_str();
  gen_cmd->add_option("--per-fact", gen.spec.per_fact, "Samples per fact")->capture_default_str();
  gen_cmd->add_flag("--interior-connective", "Place the connective at a uniform position instead of last");
  gen_cmd->add_option("--target", gen_target, "Samples to emit (default: facts x per-fact)");
  gen_cmd->add_option("--split", gen.split, "Output name prefix (default: facts file prefix)");
  gen_cmd->add_option("--seed", gen.seed, "Root seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  // schedule
  ScheduleConfig sched;
  std::string sched_kind = "clr";
  std::string sched_levels;
  std::string sched_mode = "not";
  std::string sched_base = "0-1";
  std::string sched_ks;
  std::size_t sched_per_fact = 1;
  auto* sched_cmd = app.add_subcommand("schedule", "Build a curriculum schedule and its training manifest");
  sched_cmd->add_option("kind", sched_kind, "clr, naive, no-reuse or skip")->required();
  sched_cmd->add_option("--facts", sched.facts, "Training facts file")->required();
  sched_cmd->add_option("--levels", sched_levels, "Comma-separated ranges, e.g. 0-1,0-2,0-3,0-4 or u0-4,ut0-4");
  sched_cmd->add_option("--mode", sched_mode, "Default mode for ranges without a u/ut prefix")->capture_default_str();
  sched_cmd->add_option("--per-fact", sched_per_fact, "Samples per fact")->capture_default_str();
  sched_cmd->add_option("--base", sched_base, "no-reuse: first level range")->capture_default_str();
  sched_cmd->add_option("--ks", sched_ks, "no-reuse: single depths of later levels, e.g. 2,3,4");
  sched_cmd->add_option("--steps", sched.steps, "Steps per level")->capture_default_str();
  sched_cmd->add_option("--batch", sched.batch, "Batch size")->capture_default_str();
  sched_cmd->add_option("--seed", sched.seed, "Root seed")->capture_default_str();
  sched_cmd->add_option("--out", sched.out, "Output directory")->required();

  // agent
  AgentConfig agent;
  std::string agent_kind;
  std::size_t agent_depth = kUnlimitedDepth;
  auto* agent_cmd = app.add_subcommand("agent", "Write predictions from a reference agent");
  agent_cmd->add_option("kind", agent_kind, "oracle, depth-limited, token-count, connective-bias or majority")
      ->required();
  agent_cmd->add_option("--dataset", agent.dataset, "Dataset to predict")->required();
  agent_cmd->add_option("--depth", agent_depth, "depth-limited: deepest k answered correctly");
  agent_cmd->add_option("--seed", agent.agent.seed, "Root seed")->capture_default_str();
  agent_cmd->add_option("--out", agent.out, "Output directory")->required();

  // score
  ScoreConfig sc;
  auto* score_cmd = app.add_subcommand("score", "Compute clean% and boolean% from prediction files");
  score_cmd->add_option("--dataset", sc.dataset, "Augmented dataset")->required();
  score_cmd->add_option("--base-dataset", sc.base_dataset, "Its u0 companion")->required();
  score_cmd->add_option("--preds", sc.preds, "Predictions on the augmented dataset")->required();
  score_cmd->add_option("--base-preds", sc.base_preds, "Predictions on the u0 companion")->required();
  score_cmd->add_option("--out", sc.out, "Output directory")->required();

  // cot-check
  CotCheckConfig cot;
  auto* cot_cmd = app.add_subcommand("cot-check", "Check claimed intermediate truth values against the chain");
  cot_cmd->add_option("--dataset", cot.dataset, "Dataset the traces refer to")->required();
  cot_cmd->add_option("--traces", cot.traces, "Trace file")->required();
  cot_cmd->add_option("--base-dataset", cot.base_dataset, "u0 companion, supplies fact truth when needed");
  cot_cmd->add_option("--out", cot.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    std::string summary;
    if (ingest_cmd->parsed()) {
      ingest.format = parse_corpus_format(ingest_format);
      ingest.balance = !no_balance;
      summary = cmd_ingest(ingest);
    } else if (gen_cmd->parsed()) {
      gen.spec.mode = parse_mode(gen_mode);
      if (gen_cmd->count("--interior-connective") > 0) gen.spec.placement = ConnectivePlacement::Interior;
      if (gen_target > 0) gen.target = gen_target;
      summary = cmd_generate(gen);
    } else if (sched_cmd->parsed()) {
      sched.kind = parse_schedule_kind(sched_kind);
      const Mode mode = parse_mode(sched_mode);
      if (sched.kind == ScheduleKind::NoReuse) {
        sched.base = parse_subset(sched_base, mode, sched_per_fact);
        for (const auto& k : split_list(sched_ks)) sched.ks.push_back(detail::parse_count(k, "depth"));
      } else {
        for (const auto& tok : split_list(sched_levels)) sched.levels.push_back(parse_subset(tok, mode, sched_per_fact));
        if (sched.levels.empty()) throw ConfigError("--levels is required for " + sched_kind);
      }
      summary = cmd_schedule(sched);
    } else if (agent_cmd->parsed()) {
      agent.agent.kind = parse_agent_kind(agent_kind);
      agent.agent.depth = agent_depth;
      summary = cmd_agent(agent);
    } else if (score_cmd->parsed()) {
      summary = cmd_score(sc);
    } else if (cot_cmd->parsed()) {
      summary = cmd_cot_check(cot);
    }
    std::cout << summary;
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == Error::Kind::Config ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
