#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/metrics/error_rate.hpp"

namespace scalebench::metrics {

struct BleuOptions {
  int max_n = 4;
  // Zero precisions are replaced by this floor when set.
  std::optional<double> smoothing_floor;
};

struct BleuDetail {
  double score = 0.0;  // x100
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
};

namespace detail {

using Ngram = std::vector<std::string>;

inline std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& toks, int n) {
  std::map<Ngram, std::size_t> out;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + un <= toks.size(); ++i) {
    ++out[Ngram(toks.begin() + static_cast<std::ptrdiff_t>(i),
                toks.begin() + static_cast<std::ptrdiff_t>(i + un))];
  }
  return out;
}

}  // namespace detail

// Corpus BLEU with one reference per segment, whitespace tokenization.
inline BleuDetail bleu_detail(const std::vector<std::string>& refs, const std::vector<std::string>& hyps,
                              const BleuOptions& opts = {}) {
  if (refs.size() != hyps.size()) fail(ErrorKind::DomainError, "refs and hyps differ in length");
  if (refs.empty()) fail(ErrorKind::EmptyHypothesis, "empty corpus");
  if (opts.max_n < 1) fail(ErrorKind::DomainError, "max_n must be at least 1");

  const auto n_max = static_cast<std::size_t>(opts.max_n);
  std::vector<std::size_t> matched(n_max, 0), total(n_max, 0);
  BleuDetail out;
  for (std::size_t s = 0; s < refs.size(); ++s) {
    const auto r = split_words(refs[s]);
    const auto h = split_words(hyps[s]);
    if (r.empty()) fail(ErrorKind::EmptyReference, "reference " + std::to_string(s) + " is empty");
    out.ref_len += r.size();
    out.hyp_len += h.size();
    for (std::size_t n = 1; n <= n_max; ++n) {
      const auto rc = detail::ngram_counts(r, static_cast<int>(n));
      for (const auto& [gram, count] : detail::ngram_counts(h, static_cast<int>(n))) {
        auto it = rc.find(gram);
        matched[n - 1] += std::min(count, it == rc.end() ? std::size_t{0} : it->second);
        total[n - 1] += count;
      }
    }
  }
  if (out.hyp_len == 0) fail(ErrorKind::EmptyHypothesis, "hypothesis corpus is empty");

  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < n_max; ++n) {
    double p = total[n] == 0 ? 0.0 : static_cast<double>(matched[n]) / static_cast<double>(total[n]);
    if (p == 0.0 && opts.smoothing_floor) p = *opts.smoothing_floor;
    out.precisions.push_back(p);
    if (p == 0.0) zero = true;
    else log_sum += std::log(p);
  }
  out.brevity_penalty =
      std::exp(std::min(0.0, 1.0 - static_cast<double>(out.ref_len) / static_cast<double>(out.hyp_len)));
  out.score = zero ? 0.0 : 100.0 * out.brevity_penalty * std::exp(log_sum / static_cast<double>(n_max));
  return out;
}

// ScoreReport with value = BLEU x 100.
inline ScoreReport bleu(const std::vector<std::string>& refs, const std::vector<std::string>& hyps,
                        const BleuOptions& opts = {}) {
  const auto d = bleu_detail(refs, hyps, opts);
  ScoreReport r;
  r.metric = Metric::BLEU;
  r.value = d.score;
  r.ref_len = d.ref_len;
  return r;
}

}  // namespace scalebench::metrics
