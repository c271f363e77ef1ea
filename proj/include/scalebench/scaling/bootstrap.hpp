#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/scaling/fit.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::scaling {

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  int n_resamples = 0;
  std::uint64_t seed = 0;
  int discarded = 0;

  friend bool operator==(const ConfidenceInterval&, const ConfidenceInterval&) = default;
};

struct BootstrapTarget {
  enum class Kind { Alpha, Beta, Prediction };
  Kind kind = Kind::Alpha;
  double at = 0.0;  // only for Prediction

  static BootstrapTarget alpha() { return {Kind::Alpha, 0.0}; }
  static BootstrapTarget beta() { return {Kind::Beta, 0.0}; }
  static BootstrapTarget prediction(double x) { return {Kind::Prediction, x}; }
};

namespace detail {

// Linear interpolation between order statistics of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace detail

// Percentile bootstrap over resamples-with-replacement of the series points.
inline ConfidenceInterval bootstrap_ci(const ScalingSeries& series, BootstrapTarget target,
                                       double level, int n_resamples, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) fail(ErrorKind::DomainError, "level must be in (0, 1)");
  if (n_resamples < 100) fail(ErrorKind::DomainError, "n_resamples must be at least 100");
  if (target.kind == BootstrapTarget::Kind::Prediction && !(target.at > 0.0)) {
    fail(ErrorKind::DomainError, "prediction point must be positive");
  }

  const auto& pts = series.points();
  const std::size_t n = pts.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(n_resamples));
  std::vector<double> xs(n), ys(n);
  int discarded = 0;
  for (int r = 0; r < n_resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = pts[pick(rng)];
      xs[i] = p.x;
      ys[i] = p.y;
    }
    if (std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); })) {
      ++discarded;
      continue;
    }
    const auto fit = fit_power_law(xs, ys);
    switch (target.kind) {
      case BootstrapTarget::Kind::Alpha: estimates.push_back(fit.alpha); break;
      case BootstrapTarget::Kind::Beta: estimates.push_back(fit.beta); break;
      case BootstrapTarget::Kind::Prediction: estimates.push_back(predict(fit, target.at)); break;
    }
  }
  if (2 * discarded > n_resamples) {
    fail(ErrorKind::UnstableSeries, "more than half of the bootstrap resamples were degenerate");
  }
  std::sort(estimates.begin(), estimates.end());
  const double tail = (1.0 - level) / 2.0;
  ConfidenceInterval ci;
  ci.lo = detail::quantile_sorted(estimates, tail);
  ci.hi = detail::quantile_sorted(estimates, 1.0 - tail);
  ci.level = level;
  ci.n_resamples = n_resamples;
  ci.seed = seed;
  ci.discarded = discarded;
  return ci;
}

}  // namespace scalebench::scaling
