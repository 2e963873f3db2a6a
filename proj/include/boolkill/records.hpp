#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "boolkill/evalkit.hpp"
#include "boolkill/io.hpp"

namespace boolkill {

// Predictions: {"sample_id", "predicted": "true"|"false"} per line.

inline std::string serialize_predictions(const std::vector<PredictionRecord>& preds) {
  std::string out;
  for (const auto& p : preds) {
    ordered_json j;
    j["sample_id"] = p.sample_id;
    j["predicted"] = to_string(p.predicted);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<PredictionRecord> parse_predictions(std::string_view document, const std::string& source) {
  std::vector<PredictionRecord> out;
  for_each_record(document, source, [&](const nlohmann::json& rec, const std::string& where) {
    out.push_back({get_string(rec, "sample_id", where), get_truth(rec, "predicted", where)});
  });
  return out;
}

inline std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_file(path), path.filename().string());
}

// Traces: {"sample_id", "claims": [[index, "true"|"false"], ...], "final"} per line.

inline std::string serialize_traces(const std::vector<Trace>& traces) {
  std::string out;
  for (const auto& t : traces) {
    ordered_json j;
    j["sample_id"] = t.sample_id;
    j["claims"] = ordered_json::array();
    for (const auto& c : t.claimed) j["claims"].push_back(ordered_json::array({c.index, to_string(c.value)}));
    j["final"] = to_string(t.final_claim);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Trace> parse_traces(std::string_view document, const std::string& source) {
  std::vector<Trace> out;
  for_each_record(document, source, [&](const nlohmann::json& rec, const std::string& where) {
    Trace t;
    t.sample_id = get_string(rec, "sample_id", where);
    auto claims = rec.find("claims");
    if (claims == rec.end() || !claims->is_array()) throw DataError(where + ": missing array field \"claims\"");
    for (const auto& c : *claims) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() || !c[1].is_string()) {
        throw DataError(where + ": each claim must be [index, \"true\"|\"false\"]");
      }
      try {
        t.claimed.push_back({c[0].get<std::size_t>(), parse_truth(c[1].get<std::string>())});
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
    }
    t.final_claim = get_truth(rec, "final", where);
    out.push_back(std::move(t));
  });
  return out;
}

inline std::vector<Trace> read_traces(const std::filesystem::path& path) {
  return parse_traces(read_file(path), path.filename().string());
}

inline ordered_json metrics_json(const MetricsReport& r) {
  ordered_json j;
  j["clean_accuracy"] = r.clean_accuracy;
  j["augmented_clean_accuracy"] = r.augmented_clean_accuracy;
  j["boolean_accuracy"] = r.boolean_accuracy;
  j["qualifying_count"] = r.qualifying_count;
  j["dataset_size"] = r.dataset_size;
  ordered_json per_k = ordered_json::object();
  for (const auto& [k, d] : r.per_k) {
    ordered_json e;
    e["total"] = d.total;
    e["qualifying"] = d.qualifying;
    e["boolean_accuracy"] = d.boolean_accuracy ? ordered_json(*d.boolean_accuracy) : ordered_json(nullptr);
    per_k[std::to_string(k)] = e;
  }
  j["per_k"] = per_k;
  return j;
}

inline ordered_json verdict_json(const TraceVerdict& v) {
  ordered_json j;
  j["sample_id"] = v.sample_id;
  j["steps"] = ordered_json::array();
  for (const auto& s : v.steps) {
    j["steps"].push_back({{"index", s.index},
                          {"claimed", to_string(s.claimed)},
                          {"expected", to_string(s.expected)},
                          {"consistent", s.consistent}});
  }
  j["first_inconsistent"] = v.first_inconsistent ? ordered_json(*v.first_inconsistent) : ordered_json(nullptr);
  j["final_consistent"] = v.final_consistent;
  j["expected_final"] = to_string(v.expected_final);
  return j;
}

}  // namespace boolkill
