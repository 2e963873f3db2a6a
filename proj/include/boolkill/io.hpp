#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "boolkill/builder.hpp"
#include "boolkill/error.hpp"
#include "boolkill/ingest.hpp"
#include "boolkill/logic.hpp"

namespace boolkill {

using ordered_json = nlohmann::ordered_json;

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("sha256 failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("short write to " + path.string());
}

// Calls fn(json, where) for each non-blank line of a JSON-lines document.
template <typename Fn>
void for_each_record(std::string_view document, const std::string& source, Fn&& fn) {
  std::size_t row = 0;
  std::size_t start = 0;
  while (start < document.size()) {
    auto nl = document.find('\n', start);
    if (nl == std::string_view::npos) nl = document.size();
    std::string_view line = document.substr(start, nl - start);
    start = nl + 1;
    ++row;
    if (detail::trim(line).empty()) continue;
    const std::string where = source + " row " + std::to_string(row);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!rec.is_object()) throw DataError(where + ": record is not an object");
    try {
      fn(rec, where);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  }
}

inline std::string get_string(const nlohmann::json& rec, const char* key, const std::string& where) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) throw DataError(where + ": missing string field \"" + key + "\"");
  return it->get<std::string>();
}

inline Truth get_truth(const nlohmann::json& rec, const char* key, const std::string& where) {
  try {
    return parse_truth(get_string(rec, key, where));
  } catch (const DataError& e) {
    throw DataError(where + ": field \"" + key + "\": " + e.what());
  }
}

// Facts: {"id", "text", "truth": "true"|"false"} per line.

inline std::string serialize_facts(const std::vector<Fact>& facts) {
  std::string out;
  for (const auto& f : facts) {
    ordered_json j;
    j["id"] = f.id;
    j["text"] = f.text;
    j["truth"] = to_string(f.truth);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Fact> read_facts(const std::filesystem::path& path) {
  std::vector<Fact> facts;
  for_each_record(read_file(path), path.filename().string(), [&](const nlohmann::json& rec, const std::string& where) {
    facts.push_back(Fact{get_string(rec, "id", where), get_string(rec, "text", where), get_truth(rec, "truth", where)});
  });
  check_unique_ids(facts);
  return facts;
}

// Datasets: {"id", "base_id", "fact_id", "text", "label", "k", "mode"} per line.

inline std::string serialize_samples(const std::vector<Sample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    ordered_json j;
    j["id"] = s.id;
    j["base_id"] = s.base_id;
    j["fact_id"] = s.fact_id;
    j["text"] = s.text;
    j["label"] = to_string(s.label);
    j["k"] = s.k;
    j["mode"] = to_string(s.mode);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::string dataset_digest(const Dataset& dataset) { return sha256_hex(serialize_samples(dataset.samples)); }

inline std::vector<Sample> parse_samples(std::string_view document, const std::string& source) {
  std::vector<Sample> samples;
  for_each_record(document, source, [&](const nlohmann::json& rec, const std::string& where) {
    Sample s;
    s.id = get_string(rec, "id", where);
    s.base_id = get_string(rec, "base_id", where);
    s.fact_id = get_string(rec, "fact_id", where);
    s.text = get_string(rec, "text", where);
    s.label = get_truth(rec, "label", where);
    auto k = rec.find("k");
    if (k == rec.end() || !k->is_number_unsigned()) throw DataError(where + ": missing unsigned field \"k\"");
    s.k = k->get<std::size_t>();
    try {
      s.mode = parse_mode(get_string(rec, "mode", where));
    } catch (const ConfigError& e) {
      throw DataError(where + ": " + e.what());
    }
    samples.push_back(std::move(s));
  });
  return samples;
}

inline std::string dataset_file_stem(std::string_view split, const SubsetSpec& spec) {
  return std::string(split) + "_" + std::string(to_string(spec.mode)) + "_" + std::to_string(spec.k_min) + "-" +
         std::to_string(spec.k_max);
}

inline ordered_json spec_json(const SubsetSpec& spec) {
  ordered_json j;
  j["k_min"] = spec.k_min;
  j["k_max"] = spec.k_max;
  j["mode"] = to_string(spec.mode);
  j["per_fact"] = spec.per_fact;
  j["placement"] = spec.placement == ConnectivePlacement::Final ? "final" : "interior";
  return j;
}

inline SubsetSpec spec_from_json(const nlohmann::json& j) {
  SubsetSpec spec;
  spec.k_min = j.at("k_min").get<std::size_t>();
  spec.k_max = j.at("k_max").get<std::size_t>();
  spec.mode = parse_mode(j.at("mode").get<std::string>());
  spec.per_fact = j.at("per_fact").get<std::size_t>();
  const auto placement = j.value("placement", std::string("final"));
  if (placement == "final") {
    spec.placement = ConnectivePlacement::Final;
  } else if (placement == "interior") {
    spec.placement = ConnectivePlacement::Interior;
  } else {
    throw ConfigError("unknown connective placement \"" + placement + "\"");
  }
  return spec;
}

inline ordered_json histogram_json(const std::map<std::size_t, std::size_t>& h) {
  ordered_json j = ordered_json::object();
  for (const auto& [count, n] : h) j[std::to_string(count)] = n;
  return j;
}

inline ordered_json report_json(const BalanceReport& r) {
  ordered_json j;
  j["total"] = r.total;
  j["true"] = r.n_true;
  j["false"] = r.n_false;
  ordered_json per_k = ordered_json::object();
  for (const auto& [k, n] : r.per_k) per_k[std::to_string(k)] = n;
  j["per_k"] = per_k;
  ordered_json mean_k = ordered_json::object();
  for (const auto& [k, m] : r.mean_tokens_per_k) mean_k[std::to_string(k)] = m;
  j["mean_tokens_per_k"] = mean_k;
  j["word_true_histogram"] = {{"true", histogram_json(r.true_word_hist[0])},
                              {"false", histogram_json(r.true_word_hist[1])}};
  j["word_false_histogram"] = {{"true", histogram_json(r.false_word_hist[0])},
                               {"false", histogram_json(r.false_word_hist[1])}};
  j["tokens"] = {{"mean", r.mean_tokens}, {"min", r.min_tokens}, {"max", r.max_tokens}};
  j["violations"] = r.violations;
  return j;
}

struct WrittenDataset {
  std::filesystem::path data;
  std::filesystem::path sidecar;
  std::string sha256;
};

// Writes "{stem}.jsonl" and its "{stem}.manifest.json" sidecar (spec, seed,
// audit report, content hash).
inline WrittenDataset write_dataset(const std::filesystem::path& dir, const std::string& stem, const Dataset& dataset) {
  const std::string body = serialize_samples(dataset.samples);
  WrittenDataset out{dir / (stem + ".jsonl"), dir / (stem + ".manifest.json"), sha256_hex(body)};
  write_file(out.data, body);
  ordered_json side;
  side["file"] = out.data.filename().string();
  side["count"] = dataset.samples.size();
  side["spec"] = spec_json(dataset.spec);
  side["seed"] = dataset.seed;
  side["audit"] = report_json(dataset.balance);
  side["sha256"] = out.sha256;
  write_file(out.sidecar, side.dump(2) + "\n");
  return out;
}

// Reads a dataset and, when present, its sidecar for spec and seed.
inline Dataset read_dataset(const std::filesystem::path& path) {
  Dataset d;
  d.samples = parse_samples(read_file(path), path.filename().string());
  auto sidecar = path;
  sidecar.replace_extension(".manifest.json");
  if (std::filesystem::exists(sidecar)) {
    try {
      const auto side = nlohmann::json::parse(read_file(sidecar));
      d.spec = spec_from_json(side.at("spec"));
      d.seed = side.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(sidecar.filename().string() + ": " + e.what());
    }
  }
  d.balance = audit(d);
  return d;
}

}  // namespace boolkill
