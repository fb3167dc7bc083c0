#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace heis {

using Json = nlohmann::ordered_json;

/// Structured result of a theorem or identity check: the sampled
/// configurations, the observed ratios/constants, and a pass/fail verdict
/// against the declared tolerance. Serialized as JSON lines (one record per
/// configuration, summary record last).
struct CheckReport {
  std::string name;
  uint64_t seed = 0;
  bool pass = true;
  Json params = Json::object();
  Json summary = Json::object();
  std::vector<Json> records;
  std::vector<std::string> notes;

  void note(std::string s) { notes.push_back(std::move(s)); }

  void write_jsonl(std::ostream& os) const {
    for (const auto& r : records) {
      Json line = Json::object();
      line["check"] = name;
      line["kind"] = "record";
      line["data"] = r;
      os << line.dump() << "\n";
    }
    Json s = Json::object();
    s["check"] = name;
    s["kind"] = "summary";
    s["seed"] = seed;
    s["pass"] = pass;
    s["params"] = params;
    s["summary"] = summary;
    if (!notes.empty()) s["notes"] = notes;
    os << s.dump() << "\n";
  }

  /// CSV of the record ladder: columns are the (scalar) keys of the first
  /// record, one row per record.
  void write_csv(std::ostream& os) const {
    if (records.empty()) return;
    std::vector<std::string> cols;
    for (auto it = records.front().begin(); it != records.front().end(); ++it)
      if (it.value().is_number() || it.value().is_string() || it.value().is_boolean())
        cols.push_back(it.key());
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : records) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) os << ",";
        if (r.contains(cols[i])) os << r[cols[i]].dump();
      }
      os << "\n";
    }
  }
};

}  // namespace heis
