#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalebench/error.hpp"
#include "scalebench/ingest/fixture.hpp"
#include "scalebench/scaling/bootstrap.hpp"
#include "scalebench/scaling/fit.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::ingest {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

struct FitReportFile {
  int schema_version = kReportSchemaVersion;
  std::string created_at;  // empty unless stamped
  std::string tool_version = kToolVersion;
  std::string axis;
  std::string metric;
  std::string label;
  std::vector<scaling::Point> points;
  scaling::PowerLawFit fit;
  std::optional<scaling::LossCurveFit> loss_fit;
  std::optional<scaling::ConfidenceInterval> alpha_ci;
  std::vector<std::string> provenance;

  friend bool operator==(const FitReportFile&, const FitReportFile&) = default;
};

inline nlohmann::json to_json(const FitReportFile& r) {
  using nlohmann::json;
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({p.x, p.y});
  json j = {
      {"schema_version", r.schema_version},
      {"created_at", r.created_at},
      {"tool_version", r.tool_version},
      {"series", {{"axis", r.axis}, {"metric", r.metric}, {"label", r.label}, {"points", pts}}},
      {"fit",
       {{"alpha", r.fit.alpha},
        {"beta", r.fit.beta},
        {"r_squared", r.fit.r_squared},
        {"r_squared_linear", r.fit.r_squared_linear},
        {"n_points", r.fit.n_points},
        {"fit_space", r.fit.fit_space}}},
      {"provenance", r.provenance},
  };
  if (r.loss_fit) {
    j["loss_fit"] = {{"l_inf", r.loss_fit->l_inf},
                     {"alpha", r.loss_fit->alpha},
                     {"beta", r.loss_fit->beta},
                     {"r_squared", r.loss_fit->r_squared},
                     {"n_points", r.loss_fit->n_points}};
  }
  if (r.alpha_ci) {
    j["alpha_ci"] = {{"lo", r.alpha_ci->lo},
                     {"hi", r.alpha_ci->hi},
                     {"level", r.alpha_ci->level},
                     {"n_resamples", r.alpha_ci->n_resamples},
                     {"seed", r.alpha_ci->seed},
                     {"discarded", r.alpha_ci->discarded}};
  }
  return j;
}

inline FitReportFile from_json(const nlohmann::json& j) {
  FitReportFile r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version > kReportSchemaVersion) {
      fail(ErrorKind::VersionError, "report schema version " + std::to_string(r.schema_version) +
                                        " is newer than supported version " + std::to_string(kReportSchemaVersion));
    }
    r.created_at = j.at("created_at").get<std::string>();
    r.tool_version = j.at("tool_version").get<std::string>();
    const auto& s = j.at("series");
    r.axis = s.at("axis").get<std::string>();
    r.metric = s.at("metric").get<std::string>();
    r.label = s.at("label").get<std::string>();
    for (const auto& p : s.at("points")) r.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    const auto& f = j.at("fit");
    r.fit.alpha = f.at("alpha").get<double>();
    r.fit.beta = f.at("beta").get<double>();
    r.fit.r_squared = f.at("r_squared").get<double>();
    r.fit.r_squared_linear = f.at("r_squared_linear").get<double>();
    r.fit.n_points = f.at("n_points").get<std::size_t>();
    r.fit.fit_space = f.at("fit_space").get<std::string>();
    r.provenance = j.at("provenance").get<std::vector<std::string>>();
    if (j.contains("loss_fit")) {
      const auto& l = j.at("loss_fit");
      r.loss_fit = scaling::LossCurveFit{l.at("l_inf").get<double>(), l.at("alpha").get<double>(),
                                         l.at("beta").get<double>(), l.at("r_squared").get<double>(),
                                         l.at("n_points").get<std::size_t>()};
    }
    if (j.contains("alpha_ci")) {
      const auto& c = j.at("alpha_ci");
      scaling::ConfidenceInterval ci;
      ci.lo = c.at("lo").get<double>();
      ci.hi = c.at("hi").get<double>();
      ci.level = c.at("level").get<double>();
      ci.n_resamples = c.at("n_resamples").get<int>();
      ci.seed = c.at("seed").get<std::uint64_t>();
      ci.discarded = c.at("discarded").get<int>();
      r.alpha_ci = ci;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("malformed report: ") + e.what());
  }
  return r;
}

inline std::string dump_report(const FitReportFile& r) { return to_json(r).dump(2) + "\n"; }

inline FitReportFile parse_report(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(ErrorKind::SchemaError, "report is not a JSON object");
  return from_json(j);
}

inline void save_report(const FitReportFile& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write report '" + path + "'");
  out << dump_report(r);
  if (!out) fail(ErrorKind::IoError, "short write to '" + path + "'");
}

inline FitReportFile load_report(const std::string& path) {
  try {
    return parse_report(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    fail(e.kind(), path + ": " + e.what());
  }
}

}  // namespace scalebench::ingest
