#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::scaling {

// y = beta * x^alpha, estimated by OLS on (ln x, ln y).
struct PowerLawFit {
  double alpha = 0.0;
  double beta = 1.0;
  double r_squared = 0.0;         // in log-log space
  double r_squared_linear = 0.0;  // diagnostic, in (x, y) space
  std::size_t n_points = 0;
  std::string fit_space = "log-log";

  friend bool operator==(const PowerLawFit&, const PowerLawFit&) = default;
};

// y = l_inf + beta * x^alpha.
struct LossCurveFit {
  double l_inf = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  double r_squared = 0.0;  // in (ln x, ln(y - l_inf)) space
  std::size_t n_points = 0;

  friend bool operator==(const LossCurveFit&, const LossCurveFit&) = default;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ss_res = 0.0;
  double ss_tot = 0.0;

  double r_squared() const {
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
  }
};

// Centered two-pass least squares for v = slope * u + intercept.
inline LineFit fit_line(std::span<const double> u, std::span<const double> v) {
  const auto n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu, dv = v[i] - mv;
    suu += du * du;
    suv += du * dv;
    svv += dv * dv;
  }
  if (suu == 0.0) {
    fail(ErrorKind::InsufficientData, "fit needs at least 2 distinct x values");
  }
  LineFit out;
  out.slope = suv / suu;
  out.intercept = mv - out.slope * mu;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = v[i] - (out.intercept + out.slope * u[i]);
    out.ss_res += r * r;
  }
  out.ss_tot = svv;
  return out;
}

inline void check_positive(std::span<const double> values, const char* name) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::DomainError, std::string(name) + " values must be positive and finite");
    }
  }
}

inline double linear_r_squared(std::span<const double> x, std::span<const double> y,
                               double alpha, double beta) {
  double my = 0.0;
  for (double v : y) my += v;
  my /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - beta * std::pow(x[i], alpha);
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace detail

// Raw-point variant: duplicate x values are kept as separate observations.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::DomainError, "x and y must have the same length");
  }
  if (x.size() < 2) fail(ErrorKind::InsufficientData, "power-law fit needs at least 2 points");
  detail::check_positive(x, "x");
  detail::check_positive(y, "y");

  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto line = detail::fit_line(lx, ly);
  PowerLawFit fit;
  fit.alpha = line.slope;
  fit.beta = std::exp(line.intercept);
  fit.r_squared = line.r_squared();
  fit.r_squared_linear = detail::linear_r_squared(x, y, fit.alpha, fit.beta);
  fit.n_points = x.size();
  return fit;
}

inline PowerLawFit fit_power_law(const ScalingSeries& series) {
  const auto x = series.xs();
  const auto y = series.ys();
  return fit_power_law(x, y);
}

struct LossCurveOptions {
  std::size_t grid_size = 1000;
  double upper_fraction = 0.999;   // search L_inf over [0, upper_fraction * min y]
  double refine_tolerance = 1e-6;  // relative to min y
  std::optional<double> fixed_l_inf;
};

namespace detail {

struct ShiftedFit {
  LineFit line;
  double sse = std::numeric_limits<double>::infinity();
};

inline ShiftedFit fit_shifted(std::span<const double> lx, std::span<const double> y,
                              double l_inf) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - l_inf;
    if (!(d > 0.0)) return {};
    ly[i] = std::log(d);
  }
  ShiftedFit out;
  out.line = fit_line(lx, ly);
  out.sse = out.line.ss_res;
  return out;
}

}  // namespace detail

// Minimizes the log-space residual of ln(y - L) ~ ln(beta) + alpha ln(x) over L:
// a uniform grid over [0, 0.999 min y], then golden-section search on the
// bracket around the best grid cell.
inline LossCurveFit fit_loss_curve(const ScalingSeries& series,
                                   const LossCurveOptions& opts = {}) {
  if (series.size() < 4) {
    fail(ErrorKind::InsufficientData, "loss-curve fit needs at least 4 points");
  }
  const auto x = series.xs();
  const auto y = series.ys();
  const double min_y = series.min_y();
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
    fail(ErrorKind::DegenerateSeries, "series '" + series.label() + "' is constant");
  }
  std::vector<double> lx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);

  auto sse = [&](double l) { return detail::fit_shifted(lx, y, l).sse; };

  double best_l = 0.0;
  if (opts.fixed_l_inf) {
    best_l = *opts.fixed_l_inf;
    if (!(best_l >= 0.0) || !(best_l < min_y)) {
      fail(ErrorKind::DomainError, "fixed L_inf must lie in [0, min y)");
    }
  } else {
    const std::size_t n = std::max<std::size_t>(opts.grid_size, 2);
    const double upper = opts.upper_fraction * min_y;
    const double step = upper / static_cast<double>(n - 1);
    std::size_t best_i = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sse(step * static_cast<double>(i));
      if (s < best_sse) {
        best_sse = s;
        best_i = i;
      }
    }
    double lo = best_i == 0 ? 0.0 : step * static_cast<double>(best_i - 1);
    double hi = best_i + 1 >= n ? upper : step * static_cast<double>(best_i + 1);
    const double tol = opts.refine_tolerance * min_y;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = sse(c), fd = sse(d);
    while (hi - lo > tol) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - inv_phi * (hi - lo);
        fc = sse(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + inv_phi * (hi - lo);
        fd = sse(d);
      }
    }
    const double mid = 0.5 * (lo + hi);
    best_l = step * static_cast<double>(best_i);
    best_sse = sse(best_l);
    for (double cand : {mid, c, d}) {
      const double s = sse(cand);
      if (s < best_sse) {
        best_sse = s;
        best_l = cand;
      }
    }
  }

  const auto shifted = detail::fit_shifted(lx, y, best_l);
  LossCurveFit fit;
  fit.l_inf = best_l;
  fit.alpha = shifted.line.slope;
  fit.beta = std::exp(shifted.line.intercept);
  fit.r_squared = shifted.line.r_squared();
  fit.n_points = series.size();
  return fit;
}

inline double predict(const PowerLawFit& fit, double x) {
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "prediction point must be positive");
  return fit.beta * std::pow(x, fit.alpha);
}

inline double predict(const LossCurveFit& fit, double x) {
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "prediction point must be positive");
  return fit.l_inf + fit.beta * std::pow(x, fit.alpha);
}

using AnyFit = std::variant<PowerLawFit, LossCurveFit>;

inline double predict(const AnyFit& fit, double x) {
  return std::visit([x](const auto& f) { return predict(f, x); }, fit);
}

}  // namespace scalebench::scaling
