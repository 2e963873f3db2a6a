#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "boolkill/io.hpp"
#include "boolkill/records.hpp"
#include "support/fixtures.hpp"

namespace boolkill {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("boolkill_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RoundTrip, FactsSamplesPredictionsTraces) {
  const auto dir = scratch("roundtrip");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto facts = testing::synthetic_facts(60, seed);
    facts[0].text = "Quotes \"inside\", a tab\tand unicode \xc3\xa9.";
    write_file(dir / "f.jsonl", serialize_facts(facts));
    const auto facts_back = read_facts(dir / "f.jsonl");
    ASSERT_EQ(facts_back.size(), facts.size());
    for (std::size_t i = 0; i < facts.size(); ++i) {
      EXPECT_EQ(facts_back[i].id, facts[i].id);
      EXPECT_EQ(facts_back[i].text, facts[i].text);
      EXPECT_EQ(facts_back[i].truth, facts[i].truth);
    }

    const SubsetSpec spec{1, 5, seed % 2 ? Mode::NotOnly : Mode::NotAndOr, 1, {}};
    const auto ds = generate(facts, spec, seed);
    const auto written = write_dataset(dir, "d", ds);
    const auto back = read_dataset(written.data);
    EXPECT_EQ(back.samples, ds.samples);
    EXPECT_EQ(back.spec.name(), spec.name());
    EXPECT_EQ(back.spec.mode, spec.mode);
    EXPECT_EQ(back.seed, seed);
    EXPECT_TRUE(back.balance.ok());
    EXPECT_EQ(dataset_digest(back), written.sha256);

    std::vector<PredictionRecord> preds;
    std::vector<Trace> traces;
    Rng rng(seed);
    for (const auto& s : ds.samples) {
      preds.push_back({s.id, rng.coin() ? Truth::True : Truth::False});
      Trace t{s.id, {}, rng.coin() ? Truth::True : Truth::False};
      for (std::size_t i = 1; i <= s.k; ++i) {
        if (rng.coin()) t.claimed.push_back({i, rng.coin() ? Truth::True : Truth::False});
      }
      traces.push_back(t);
    }
    EXPECT_EQ(parse_predictions(serialize_predictions(preds), "p"), preds);
    const auto traces_back = parse_traces(serialize_traces(traces), "t");
    ASSERT_EQ(traces_back.size(), traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i) {
      EXPECT_EQ(traces_back[i].sample_id, traces[i].sample_id);
      EXPECT_EQ(traces_back[i].final_claim, traces[i].final_claim);
      ASSERT_EQ(traces_back[i].claimed.size(), traces[i].claimed.size());
      for (std::size_t c = 0; c < traces[i].claimed.size(); ++c) {
        EXPECT_EQ(traces_back[i].claimed[c].index, traces[i].claimed[c].index);
        EXPECT_EQ(traces_back[i].claimed[c].value, traces[i].claimed[c].value);
      }
    }
  }
}

TEST(Sidecar, Contents) {
  const auto dir = scratch("sidecar");
  const auto facts = testing::synthetic_facts(40, 2);
  const auto ds = generate(facts, {1, 3, Mode::NotOnly, 1, {}}, 11);
  const auto w = write_dataset(dir, dataset_file_stem("train", ds.spec), ds);
  EXPECT_EQ(w.data.filename(), "train_not_1-3.jsonl");
  const auto side = nlohmann::json::parse(read_file(w.sidecar));
  EXPECT_EQ(side["file"], "train_not_1-3.jsonl");
  EXPECT_EQ(side["count"], ds.samples.size());
  EXPECT_EQ(side["seed"], 11);
  EXPECT_EQ(side["sha256"], sha256_hex(read_file(w.data)));
  EXPECT_EQ(side["spec"]["k_min"], 1);
  EXPECT_EQ(side["spec"]["k_max"], 3);
  EXPECT_TRUE(side["audit"]["violations"].empty());
  EXPECT_EQ(side["audit"]["true"], side["audit"]["false"]);
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

TEST(Malformed, RowNumbersInErrors) {
  const std::string good =
      R"({"id":"a","base_id":"x","fact_id":"x","text":"S0: A.\nIs S0 true or false?","label":"true","k":0,"mode":"not"})";
  EXPECT_EQ(parse_samples(good + "\n", "d").size(), 1u);
  EXPECT_NE(error_of([&] { parse_samples(good + "\n\n{oops\n", "d.jsonl"); }).find("d.jsonl row 3"), std::string::npos);
  EXPECT_NE(error_of([&] { parse_samples(R"({"id":"a"})", "d"); }).find("\"base_id\""), std::string::npos);
  auto bad_label = good;
  bad_label.replace(bad_label.find("\"true\""), 6, "\"yes\"");
  EXPECT_NE(error_of([&] { parse_samples(good + "\n" + bad_label, "d"); }).find("row 2"), std::string::npos);
  auto bad_k = good;
  bad_k.replace(bad_k.find("\"k\":0"), 5, "\"k\":-1");
  EXPECT_NE(error_of([&] { parse_samples(bad_k, "d"); }).find("\"k\""), std::string::npos);
  EXPECT_NE(error_of([&] { parse_samples("[1,2]", "d"); }).find("not an object"), std::string::npos);
  EXPECT_NE(error_of([&] { parse_predictions(R"({"sample_id":"a","predicted":"maybe"})", "p"); }).find("row 1"),
            std::string::npos);
  EXPECT_NE(error_of([&] { parse_traces(R"({"sample_id":"a","claims":[[1]],"final":"true"})", "t"); }).find("claim"),
            std::string::npos);

  const auto dir = scratch("dup");
  write_file(dir / "f.jsonl", R"({"id":"a","text":"A.","truth":"true"})"
                              "\n"
                              R"({"id":"a","text":"B.","truth":"false"})"
                              "\n");
  EXPECT_THROW(read_facts(dir / "f.jsonl"), DataError);
  EXPECT_THROW(read_file(dir / "missing.jsonl"), DataError);
}

}  // namespace
}  // namespace boolkill
