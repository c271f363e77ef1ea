#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::compute {

struct CostRow {
  std::string model_label;
  int beam = 1;
  double tflops = 0.0;
  std::optional<double> wer;

  friend bool operator==(const CostRow&, const CostRow&) = default;
};

// Measured (model, beam) -> TFLOPS rows; (model, beam) pairs are unique.
class CostTable {
 public:
  CostTable() = default;
  explicit CostTable(std::vector<CostRow> rows) {
    for (auto& r : rows) add(std::move(r));
  }

  void add(CostRow row) {
    if (row.beam < 1) fail(ErrorKind::SchemaError, "beam must be at least 1 for '" + row.model_label + "'");
    if (!(row.tflops > 0.0)) {
      fail(ErrorKind::SchemaError, "tflops must be positive for '" + row.model_label + "'");
    }
    for (const auto& r : rows_) {
      if (r.model_label == row.model_label && r.beam == row.beam) {
        fail(ErrorKind::SchemaError, "duplicate cost row (" + row.model_label + ", beam " +
                                         std::to_string(row.beam) + ")");
      }
    }
    rows_.push_back(std::move(row));
  }

  const std::vector<CostRow>& rows() const noexcept { return rows_; }

  // Model labels in first-appearance order.
  std::vector<std::string> models() const {
    std::vector<std::string> out;
    for (const auto& r : rows_) {
      if (std::find(out.begin(), out.end(), r.model_label) == out.end()) out.push_back(r.model_label);
    }
    return out;
  }

 private:
  std::vector<CostRow> rows_;
};

// Per-model least-squares scale k minimizing sum (k * estimate - measured)^2.
// `estimates` is keyed by (model, beam) and must cover every table row.
inline std::map<std::string, double> calibrate(
    const CostTable& table, const std::map<std::pair<std::string, int>, double>& estimates) {
  std::map<std::string, std::pair<double, double>> acc;  // (sum e*m, sum e*e)
  for (const auto& row : table.rows()) {
    auto it = estimates.find({row.model_label, row.beam});
    if (it == estimates.end()) {
      fail(ErrorKind::InsufficientData, "no estimate for (" + row.model_label + ", beam " +
                                            std::to_string(row.beam) + ")");
    }
    auto& [em, ee] = acc[row.model_label];
    em += it->second * row.tflops;
    ee += it->second * it->second;
  }
  std::map<std::string, double> out;
  for (const auto& [model, sums] : acc) {
    if (sums.second == 0.0) {
      fail(ErrorKind::DegenerateCalibration, "all estimates are zero for '" + model + "'");
    }
    out[model] = sums.first / sums.second;
  }
  return out;
}

// Cost model for the planner when no measured table is used.
struct CostEstimator {
  std::function<double(const std::string& model, int beam)> tflops;
  int max_beam = 64;
};

using CostSource = std::variant<CostTable, CostEstimator>;

struct DecodePlan {
  std::string model_label;
  int beam = 1;
  double cost_tflops = 0.0;
  bool below_window = false;

  friend bool operator==(const DecodePlan&, const DecodePlan&) = default;
};

struct BalanceResult {
  std::vector<DecodePlan> plans;
  std::vector<std::string> infeasible;
};

// For each model pick the most expensive beam that stays within budget_hi;
// equal costs go to the larger beam.
inline BalanceResult balance_budget(const std::vector<std::string>& models, const CostSource& source,
                                    double budget_lo, double budget_hi) {
  if (models.empty()) fail(ErrorKind::InsufficientData, "no models to balance");
  if (!(budget_lo < budget_hi)) fail(ErrorKind::DomainError, "budget_lo must be below budget_hi");

  auto candidates = [&](const std::string& model) {
    std::vector<std::pair<int, double>> out;
    if (const auto* table = std::get_if<CostTable>(&source)) {
      for (const auto& r : table->rows()) {
        if (r.model_label == model) out.emplace_back(r.beam, r.tflops);
      }
    } else {
      const auto& est = std::get<CostEstimator>(source);
      for (int b = 1; b <= est.max_beam; ++b) out.emplace_back(b, est.tflops(model, b));
    }
    return out;
  };

  BalanceResult result;
  for (const auto& model : models) {
    std::optional<DecodePlan> best;
    for (const auto& [beam, cost] : candidates(model)) {
      if (cost > budget_hi) continue;
      if (!best || cost > best->cost_tflops || (cost == best->cost_tflops && beam > best->beam)) {
        best = DecodePlan{model, beam, cost, false};
      }
    }
    if (!best) {
      result.infeasible.push_back(model);
      continue;
    }
    best->below_window = best->cost_tflops < budget_lo;
    result.plans.push_back(*best);
  }
  return result;
}

}  // namespace scalebench::compute
