#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalebench/error.hpp"
#include "scalebench/ingest/fixture.hpp"

namespace scalebench::ingest {

struct EvalRow {
  std::string utt_id;
  std::string lang;
  std::string model_label;
  double size_params = 0.0;
  std::string task;  // "asr" or "st"
  std::string ref;
  std::string hyp;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct RowError {
  int line = 0;
  std::string field;  // empty when the whole line is malformed
  std::string message;
};

struct Manifest {
  std::vector<EvalRow> rows;
  std::vector<RowError> errors;
};

// One JSON object per line. Bad lines are collected as located errors and
// skipped; only an unreadable file is fatal.
inline Manifest parse_manifest(std::istream& in) {
  Manifest m;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      m.errors.push_back({line_no, "", "malformed record"});
      continue;
    }
    EvalRow row;
    bool ok = true;
    auto text = [&](const char* field, std::string& dst, bool allow_empty) {
      if (!ok) return;
      auto it = j.find(field);
      if (it == j.end() || !it->is_string()) {
        m.errors.push_back({line_no, field, "missing or non-string field"});
        ok = false;
        return;
      }
      dst = it->get<std::string>();
      if (dst.empty() && !allow_empty) {
        m.errors.push_back({line_no, field, "empty field"});
        ok = false;
      }
    };
    text("utt_id", row.utt_id, false);
    text("lang", row.lang, false);
    text("model_label", row.model_label, false);
    text("task", row.task, false);
    text("ref", row.ref, false);
    text("hyp", row.hyp, true);
    if (ok && row.task != "asr" && row.task != "st") {
      m.errors.push_back({line_no, "task", "must be 'asr' or 'st'"});
      ok = false;
    }
    if (ok) {
      auto it = j.find("size_params");
      try {
        if (it == j.end()) {
          m.errors.push_back({line_no, "size_params", "missing field"});
          ok = false;
        } else if (it->is_number()) {
          row.size_params = it->get<double>();
        } else if (it->is_string()) {
          row.size_params = parse_size(it->get<std::string>());
        } else {
          m.errors.push_back({line_no, "size_params", "must be a number or size string"});
          ok = false;
        }
      } catch (const Error& e) {
        m.errors.push_back({line_no, "size_params", e.what()});
        ok = false;
      }
      if (ok && !(row.size_params > 0.0)) {
        m.errors.push_back({line_no, "size_params", "must be positive"});
        ok = false;
      }
    }
    if (ok) m.rows.push_back(std::move(row));
  }
  return m;
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open manifest '" + path + "'");
  return parse_manifest(in);
}

}  // namespace scalebench::ingest
