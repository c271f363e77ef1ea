#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::scaling {

enum class ScaleAxis { ModelParams, DataHours, ComputeFlops };

constexpr std::string_view to_string(ScaleAxis axis) noexcept {
  switch (axis) {
    case ScaleAxis::ModelParams: return "model_params";
    case ScaleAxis::DataHours: return "data_hours";
    case ScaleAxis::ComputeFlops: return "compute_flops";
  }
  return "unknown";
}

constexpr std::string_view unit_of(ScaleAxis axis) noexcept {
  switch (axis) {
    case ScaleAxis::ModelParams: return "parameters";
    case ScaleAxis::DataHours: return "hours";
    case ScaleAxis::ComputeFlops: return "FLOPS";
  }
  return "unknown";
}

inline ScaleAxis axis_from_string(std::string_view s) {
  if (s == "model_params" || s == "params" || s == "N") return ScaleAxis::ModelParams;
  if (s == "data_hours" || s == "hours" || s == "T") return ScaleAxis::DataHours;
  if (s == "compute_flops" || s == "flops" || s == "B") return ScaleAxis::ComputeFlops;
  fail(ErrorKind::SchemaError, "unknown scale axis '" + std::string(s) + "'");
}

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Observations of one metric along one scale axis. Construction sorts by x and
// averages y over duplicate x, so points are strictly increasing in x.
class ScalingSeries {
 public:
  ScalingSeries(ScaleAxis axis, std::string metric_name, std::string label,
                std::vector<Point> points)
      : axis_(axis),
        metric_name_(std::move(metric_name)),
        label_(std::move(label)) {
    for (const auto& p : points) {
      if (!(p.x > 0.0) || !std::isfinite(p.x)) {
        fail(ErrorKind::DomainError,
             "series '" + label_ + "': x must be positive and finite");
      }
      if (!(p.y > 0.0) || !std::isfinite(p.y)) {
        fail(ErrorKind::DomainError,
             "series '" + label_ + "': y must be positive and finite");
      }
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const Point& a, const Point& b) { return a.x < b.x; });
    for (std::size_t i = 0; i < points.size();) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < points.size() && points[j].x == points[i].x) sum += points[j++].y;
      points_.push_back({points[i].x, sum / static_cast<double>(j - i)});
      i = j;
    }
    if (points_.size() < 2) {
      fail(ErrorKind::InsufficientData,
           "series '" + label_ + "' needs at least 2 distinct x values");
    }
  }

  ScaleAxis axis() const noexcept { return axis_; }
  const std::string& metric_name() const noexcept { return metric_name_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  std::vector<double> xs() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.x);
    return out;
  }
  std::vector<double> ys() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.y);
    return out;
  }

  double min_y() const {
    return std::min_element(points_.begin(), points_.end(),
                            [](const Point& a, const Point& b) { return a.y < b.y; })
        ->y;
  }

  friend bool operator==(const ScalingSeries&, const ScalingSeries&) = default;

 private:
  ScaleAxis axis_;
  std::string metric_name_;
  std::string label_;
  std::vector<Point> points_;
};

}  // namespace scalebench::scaling
