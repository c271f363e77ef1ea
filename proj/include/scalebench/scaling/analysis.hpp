#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/scaling/fit.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::scaling {

enum class CapabilityClass { NonFunctional, Marginal, Functional };

constexpr std::string_view to_string(CapabilityClass c) noexcept {
  switch (c) {
    case CapabilityClass::NonFunctional: return "NonFunctional";
    case CapabilityClass::Marginal: return "Marginal";
    case CapabilityClass::Functional: return "Functional";
  }
  return "Unknown";
}

inline constexpr double kIntelligibleBleu = 5.0;
inline constexpr double kFunctionalBleu = 15.0;

inline CapabilityClass classify_capability(double bleu) {
  if (!(bleu >= 0.0)) fail(ErrorKind::DomainError, "BLEU must be nonnegative");
  if (bleu < kIntelligibleBleu) return CapabilityClass::NonFunctional;
  if (bleu > kFunctionalBleu) return CapabilityClass::Functional;
  return CapabilityClass::Marginal;
}

struct DataSensitivityReport {
  PowerLawFit cross_fit;
  std::vector<std::string> languages;  // overlap, lexical order
  std::map<std::string, double> per_language_r2;
  double median_per_language_r2 = 0.0;
  // median(per_language_r2) - cross_fit.r_squared
  double ordering_statistic = 0.0;
};

inline double median(std::vector<double> v) {
  if (v.empty()) fail(ErrorKind::InsufficientData, "median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Regresses WER on training hours across languages and contrasts its r^2 with
// the per-language model-size fits. per_language_r2 may cover more languages
// than the overlap; only overlapping languages enter the median.
inline DataSensitivityReport data_sensitivity_report(
    const std::map<std::string, double>& hours, const std::map<std::string, double>& scores,
    const std::map<std::string, double>& per_language_r2) {
  DataSensitivityReport report;
  std::vector<double> xs, ys;
  for (const auto& [lang, h] : hours) {
    auto it = scores.find(lang);
    if (it == scores.end()) continue;
    if (!(h > 0.0)) fail(ErrorKind::DomainError, "hours for '" + lang + "' must be positive");
    report.languages.push_back(lang);
    xs.push_back(h);
    ys.push_back(it->second);
  }
  if (report.languages.size() < 5) {
    fail(ErrorKind::InsufficientData,
         "data sensitivity needs at least 5 overlapping languages, got " +
             std::to_string(report.languages.size()));
  }
  report.cross_fit = fit_power_law(xs, ys);
  std::vector<double> r2s;
  for (const auto& lang : report.languages) {
    auto it = per_language_r2.find(lang);
    if (it == per_language_r2.end()) continue;
    report.per_language_r2[lang] = it->second;
    r2s.push_back(it->second);
  }
  if (r2s.empty()) {
    fail(ErrorKind::InsufficientData, "no per-language r^2 for the overlapping languages");
  }
  report.median_per_language_r2 = median(r2s);
  report.ordering_statistic = report.median_per_language_r2 - report.cross_fit.r_squared;
  return report;
}

// Computes the per-language r^2 from model-size series.
inline DataSensitivityReport data_sensitivity_report(
    const std::map<std::string, double>& hours, const std::map<std::string, double>& scores,
    const std::vector<ScalingSeries>& model_size_series) {
  std::map<std::string, double> r2;
  for (const auto& s : model_size_series) r2[s.label()] = fit_power_law(s).r_squared;
  return data_sensitivity_report(hours, scores, r2);
}

enum class Direction { LowerIsBetter, HigherIsBetter };

inline constexpr double kDefaultEmergenceSigma = 2.0;

struct EmergenceReport {
  double holdout_x = 0.0;
  double predicted_y = 0.0;
  double observed_y = 0.0;
  // Positive means better than extrapolated, in units of the in-fit
  // log-residual standard deviation.
  double residual_sigma = 0.0;
  bool flagged = false;
};

// Fits the first n - holdout_count points and scores each held-out point
// against the extrapolation.
inline std::vector<EmergenceReport> emergence_score(
    const ScalingSeries& series, int holdout_count,
    double threshold_sigma = kDefaultEmergenceSigma,
    Direction direction = Direction::LowerIsBetter) {
  const auto n = static_cast<int>(series.size());
  if (holdout_count < 1) fail(ErrorKind::InsufficientData, "holdout_count must be at least 1");
  if (n - holdout_count < 3) {
    fail(ErrorKind::InsufficientData, "emergence needs at least 3 in-fit points");
  }
  const auto& pts = series.points();
  const auto m = static_cast<std::size_t>(n - holdout_count);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < m; ++i) {
    xs.push_back(pts[i].x);
    ys.push_back(pts[i].y);
  }
  const auto fit = fit_power_law(xs, ys);
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = std::log(ys[i]) - std::log(predict(fit, xs[i]));
    ss += r * r;
  }
  const double sigma = std::sqrt(ss / static_cast<double>(m - 2));
  constexpr double kZero = 1e-12;
  const double sign = direction == Direction::LowerIsBetter ? -1.0 : 1.0;

  std::vector<EmergenceReport> out;
  for (std::size_t i = m; i < pts.size(); ++i) {
    EmergenceReport rep;
    rep.holdout_x = pts[i].x;
    rep.observed_y = pts[i].y;
    rep.predicted_y = predict(fit, pts[i].x);
    const double residual = std::log(rep.observed_y) - std::log(rep.predicted_y);
    const double scale = std::max(1.0, std::abs(std::log(rep.observed_y)));
    if (sigma <= kZero * scale) {
      if (std::abs(residual) <= kZero * scale) {
        rep.residual_sigma = 0.0;
        rep.flagged = false;
      } else {
        rep.residual_sigma = std::numeric_limits<double>::infinity();
        rep.flagged = true;
      }
    } else {
      rep.residual_sigma = sign * residual / sigma;
      rep.flagged = rep.residual_sigma > threshold_sigma;
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace scalebench::scaling
