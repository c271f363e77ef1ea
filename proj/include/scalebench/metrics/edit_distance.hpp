#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::metrics {

enum class EditOp { Match, Sub, Del, Ins };

constexpr std::string_view to_string(EditOp op) noexcept {
  switch (op) {
    case EditOp::Match: return "match";
    case EditOp::Sub: return "sub";
    case EditOp::Del: return "del";
    case EditOp::Ins: return "ins";
  }
  return "?";
}

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t hits = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  EditCounts& operator+=(const EditCounts& o) noexcept {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    hits += o.hits;
    return *this;
  }

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Positions index into the reference / hypothesis sequences.
struct AlignStep {
  EditOp op = EditOp::Match;
  std::optional<std::size_t> ref_index;
  std::optional<std::size_t> hyp_index;

  friend bool operator==(const AlignStep&, const AlignStep&) = default;
};

struct Alignment {
  std::vector<AlignStep> steps;
  std::size_t distance = 0;
  EditCounts counts;
};

namespace detail {

template <typename T>
void fill_table(std::span<const T> ref, std::span<const T> hyp, std::vector<std::size_t>& dp) {
  const std::size_t cols = hyp.size() + 1;
  dp.assign((ref.size() + 1) * cols, 0);
  for (std::size_t j = 0; j < cols; ++j) dp[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    std::size_t* row = &dp[i * cols];
    const std::size_t* prev = &dp[(i - 1) * cols];
    row[0] = i;
    for (std::size_t j = 1; j < cols; ++j) {
      const std::size_t diag = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      row[j] = std::min({diag, prev[j] + 1, row[j - 1] + 1});
    }
  }
}

}  // namespace detail

// Unit-cost Levenshtein alignment. Among optimal paths the backtrace, walking
// from the sequence ends, prefers Match, then Sub, then Del, then Ins.
template <typename T>
Alignment align(std::span<const T> ref, std::span<const T> hyp) {
  if (ref.empty()) fail(ErrorKind::EmptyReference, "reference is empty");
  thread_local std::vector<std::size_t> dp;
  detail::fill_table(ref, hyp, dp);
  const std::size_t cols = hyp.size() + 1;
  auto at = [&](std::size_t i, std::size_t j) { return dp[i * cols + j]; };

  Alignment out;
  out.distance = at(ref.size(), hyp.size());
  std::size_t i = ref.size(), j = hyp.size();
  out.steps.reserve(i + j);
  while (i > 0 || j > 0) {
    const std::size_t here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && at(i - 1, j - 1) == here) {
      out.steps.push_back({EditOp::Match, i - 1, j - 1});
      ++out.counts.hits;
      --i, --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + 1 == here) {
      out.steps.push_back({EditOp::Sub, i - 1, j - 1});
      ++out.counts.substitutions;
      --i, --j;
    } else if (i > 0 && at(i - 1, j) + 1 == here) {
      out.steps.push_back({EditOp::Del, i - 1, std::nullopt});
      ++out.counts.deletions;
      --i;
    } else {
      out.steps.push_back({EditOp::Ins, std::nullopt, j - 1});
      ++out.counts.insertions;
      --j;
    }
  }
  std::reverse(out.steps.begin(), out.steps.end());
  return out;
}

template <typename T>
Alignment align(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return align(std::span<const T>(ref), std::span<const T>(hyp));
}

struct EditResult {
  std::size_t distance = 0;
  EditCounts counts;
};

template <typename T>
EditResult edit_distance(const std::vector<T>& ref, const std::vector<T>& hyp) {
  auto a = align(ref, hyp);
  return {a.distance, a.counts};
}

// Distance only, two-row DP; no emptiness requirement.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace scalebench::metrics
