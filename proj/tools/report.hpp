#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace bcv::cli {

struct ReportEntry {
  std::string claim_id;
  double computed = 0.0;
  std::optional<double> paper_value;
  double tolerance = 0.0;
  bool pass = false;
  long long runtime_ms = 0;
  std::optional<std::uint64_t> seed;
  std::string grid;
  std::string detail;
};

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline nlohmann::ordered_json to_json(const ReportEntry& e) {
  nlohmann::ordered_json j;
  j["claim_id"] = e.claim_id;
  // JSON has no infinity; vacuous values are written as strings.
  if (std::isfinite(e.computed)) j["computed"] = e.computed; else j["computed"] = format_double(e.computed);
  if (e.paper_value) j["paper_value"] = *e.paper_value; else j["paper_value"] = nullptr;
  j["tolerance"] = e.tolerance;
  j["pass"] = e.pass;
  j["runtime_ms"] = e.runtime_ms;
  if (e.seed) j["seed"] = *e.seed; else j["seed"] = nullptr;
  j["grid"] = e.grid;
  j["detail"] = e.detail;
  return j;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_json(std::ostream& os, const std::string& command, const std::vector<ReportEntry>& entries) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["command"] = command;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) doc["entries"].push_back(to_json(e));
  os << doc.dump(2) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<ReportEntry>& entries) {
  os << "claim_id,computed,paper_value,tolerance,pass,runtime_ms,seed,grid,detail\n";
  for (const auto& e : entries) {
    os << csv_quote(e.claim_id) << ',' << format_double(e.computed) << ','
       << (e.paper_value ? format_double(*e.paper_value) : "") << ',' << format_double(e.tolerance) << ','
       << (e.pass ? "true" : "false") << ',' << e.runtime_ms << ',' << (e.seed ? std::to_string(*e.seed) : "") << ','
       << csv_quote(e.grid) << ',' << csv_quote(e.detail) << '\n';
  }
}

inline void write_text(std::ostream& os, const std::vector<ReportEntry>& entries) {
  for (const auto& e : entries) {
    os << (e.pass ? "[PASS] " : "[FAIL] ") << e.claim_id << " = " << format_double(e.computed);
    if (e.paper_value) os << " (reference " << format_double(*e.paper_value) << " +- " << format_double(e.tolerance) << ")";
    os << "  " << e.runtime_ms << " ms";
    if (!e.detail.empty()) os << "\n       " << e.detail;
    os << '\n';
  }
}

}  // namespace bcv::cli
