#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "boolkill/io.hpp"
#include "boolkill/records.hpp"
#include "support/fixtures.hpp"

namespace boolkill {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("boolkill_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  Outcome run(const std::string& args) {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = std::string(BOOLKILL_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out), read_file(err)};
  }

  std::string facts_file(std::size_t n) {
    const auto p = dir_ / "syn.facts.jsonl";
    write_file(p, serialize_facts(testing::synthetic_facts(n, 4)));
    return p.string();
  }

  fs::path dir_;
};

TEST_F(Cli, Ingest) {
  const auto r = run("ingest " + std::string(BOOLKILL_TEST_DATA) + "/scitail_sample.tsv --test-count 2 --out " +
                     (dir_ / "facts").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto train = read_facts(dir_ / "facts" / "train.facts.jsonl");
  const auto test = read_facts(dir_ / "facts" / "test.facts.jsonl");
  EXPECT_EQ(train.size(), 4u);
  ASSERT_EQ(test.size(), 2u);
  EXPECT_NE(test[0].truth, test[1].truth);
  EXPECT_TRUE(fs::exists(dir_ / "facts" / "ingest.run.json"));
}

TEST_F(Cli, IngestBadLabel) {
  const auto r = run("ingest " + std::string(BOOLKILL_TEST_DATA) + "/bad_label.tsv --test-count 0 --out " +
                     (dir_ / "facts").string());
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("bad_label.tsv"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("2"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigErrors) {
  const auto facts = facts_file(20);
  const auto out = (dir_ / "d").string();
  EXPECT_EQ(run("generate --facts " + facts + " --k-min 1 --k-max 1 --mode not-and-or --out " + out).status, 2);
  EXPECT_EQ(run("generate --facts " + facts + " --k-min 3 --k-max 2 --out " + out).status, 2);
  EXPECT_EQ(run("generate --facts " + facts + " --k-min 1 --k-max 2 --mode xor --out " + out).status, 2);
  EXPECT_EQ(run("generate --facts " + facts).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("agent depth-limited --dataset x.jsonl --out " + out).status, 2);
}

TEST_F(Cli, GenerateIsReproducible) {
  const auto facts = facts_file(60);
  const auto a = run("generate --facts " + facts + " --k-min 1 --k-max 4 --seed 9 --out " + (dir_ / "a").string());
  const auto b = run("generate --facts " + facts + " --k-min 1 --k-max 4 --seed 9 --out " + (dir_ / "b").string());
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  const auto da = read_file(dir_ / "a" / "syn_not_1-4.jsonl");
  EXPECT_EQ(da, read_file(dir_ / "b" / "syn_not_1-4.jsonl"));
  EXPECT_EQ(read_file(dir_ / "a" / "syn_not_1-4.manifest.json"), read_file(dir_ / "b" / "syn_not_1-4.manifest.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "syn_not_1-4.run.json"));
  const auto c = run("generate --facts " + facts + " --k-min 1 --k-max 4 --seed 10 --out " + (dir_ / "c").string());
  ASSERT_EQ(c.status, 0);
  EXPECT_NE(da, read_file(dir_ / "c" / "syn_not_1-4.jsonl"));
}

TEST_F(Cli, AgentAndScore) {
  const auto facts = facts_file(80);
  const auto d = (dir_ / "d").string();
  ASSERT_EQ(run("generate --facts " + facts + " --k-min 0 --k-max 0 --out " + d).status, 0);
  ASSERT_EQ(run("generate --facts " + facts + " --k-min 2 --k-max 3 --mode not-and-or --out " + d).status, 0);
  const auto base = d + "/syn_not_0-0.jsonl";
  const auto aug = d + "/syn_not-and-or_2-3.jsonl";
  const auto p = (dir_ / "p").string();
  ASSERT_EQ(run("agent oracle --dataset " + base + " --out " + p).status, 0);
  ASSERT_EQ(run("agent oracle --dataset " + aug + " --out " + p).status, 0);
  const auto r = run("score --dataset " + aug + " --base-dataset " + base + " --preds " + p +
                     "/syn_not-and-or_2-3.oracle.preds.jsonl --base-preds " + p +
                     "/syn_not_0-0.oracle.preds.jsonl --out " + (dir_ / "s").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto report = nlohmann::json::parse(read_file(dir_ / "s" / "report.json"));
  EXPECT_DOUBLE_EQ(report["clean_accuracy"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["boolean_accuracy"].get<double>(), 1.0);
  EXPECT_EQ(read_file(dir_ / "s" / "per_k.csv").rfind("k,total,qualifying,boolean_accuracy\n", 0), 0u);

  // Everything wrong on the base set: nothing qualifies.
  auto preds = read_predictions(p + "/syn_not_0-0.oracle.preds.jsonl");
  for (auto& x : preds) x.predicted = negate(x.predicted);
  write_file(dir_ / "wrong.jsonl", serialize_predictions(preds));
  const auto empty = run("score --dataset " + aug + " --base-dataset " + base + " --preds " + p +
                         "/syn_not-and-or_2-3.oracle.preds.jsonl --base-preds " + (dir_ / "wrong.jsonl").string() +
                         " --out " + (dir_ / "s2").string());
  EXPECT_EQ(empty.status, 3);
  EXPECT_NE(empty.err.find("undefined"), std::string::npos);
}

TEST_F(Cli, Schedule) {
  const auto facts = facts_file(100);
  const auto out = dir_ / "sched";
  const auto r = run("schedule clr --facts " + facts + " --levels 0-1,0-2,0-3 --steps 10 --batch 4 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "schedule.json"));
  const auto manifest = read_file(out / "manifest.txt");
  EXPECT_EQ(std::count(manifest.begin(), manifest.end(), '\n'), 3 * (1 + 40));
  EXPECT_EQ(manifest.rfind("# level", 0), 0u);
  const auto again = dir_ / "again";
  ASSERT_EQ(run("schedule clr --facts " + facts + " --levels 0-1,0-2,0-3 --steps 10 --batch 4 --out " + again.string())
                .status,
            0);
  EXPECT_EQ(read_file(again / "manifest.txt"), manifest);
  EXPECT_EQ(run("schedule skip --facts " + facts + " --levels 0-1,0-2 --out " + out.string()).status, 2);
}

TEST_F(Cli, CotCheckNamesTheBrokenStep) {
  const Fact crust{"crust", "A crust is a portion of a world.", Truth::True};
  Dataset ds;
  ds.spec = {4, 4, Mode::NotOnly, 1, {}};
  ds.samples.push_back(build_sample(crust, {Assert{0, false}, Assert{1, false}, Assert{2, false}, Assert{3, true}}, ds.spec, 0));
  const auto w = write_dataset(dir_, "crust", ds);
  write_file(dir_ / "traces.jsonl", serialize_traces({Trace{ds.samples[0].id, {{3, Truth::False}, {4, Truth::True}}, Truth::True}}));
  const auto r = run("cot-check --dataset " + w.data.string() + " --traces " + (dir_ / "traces.jsonl").string() +
                     " --out " + (dir_ / "cot").string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("first inconsistent step S4"), std::string::npos) << r.out;
  const auto report = nlohmann::json::parse(read_file(dir_ / "cot" / "trace_report.json"));
  EXPECT_TRUE(report.dump().find("\"first_inconsistent\":4") != std::string::npos) << report.dump();
}

}  // namespace
}  // namespace boolkill
