#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/metrics/edit_distance.hpp"
#include "scalebench/metrics/normalize.hpp"
#include "scalebench/metrics/unicode.hpp"

namespace scalebench::metrics {

enum class Metric { WER, CER, NCER, BLEU };

constexpr std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::WER: return "WER";
    case Metric::CER: return "CER";
    case Metric::NCER: return "NCER";
    case Metric::BLEU: return "BLEU";
  }
  return "?";
}

// value is a fraction for WER/CER/NCER and may exceed 1.
struct ScoreReport {
  Metric metric = Metric::WER;
  double value = 0.0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t hits = 0;
  std::size_t ref_len = 0;

  static ScoreReport from_counts(Metric metric, const EditCounts& c) {
    ScoreReport r;
    r.metric = metric;
    r.substitutions = c.substitutions;
    r.deletions = c.deletions;
    r.insertions = c.insertions;
    r.hits = c.hits;
    r.ref_len = c.substitutions + c.deletions + c.hits;
    if (r.ref_len == 0) fail(ErrorKind::EmptyReference, "reference corpus is empty");
    r.value = static_cast<double>(c.errors()) / static_cast<double>(r.ref_len);
    return r;
  }
};

enum class CharUnit { CodePoint, Grapheme };

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::u32string cur;
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_space(c)) {
      if (!cur.empty()) out.push_back(unicode::encode(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(unicode::encode(cur));
  return out;
}

struct CharOptions {
  CharUnit unit = CharUnit::CodePoint;
  bool remove_whitespace = true;
};

inline std::vector<std::string> split_chars(std::string_view text, const CharOptions& opts) {
  std::string s = unicode::nfc(text);
  if (opts.remove_whitespace) {
    s = normalize(s, NormalizationChain{{{NormStep::Kind::RemoveWhitespace, {}}}});
  }
  return opts.unit == CharUnit::Grapheme ? unicode::graphemes(s) : unicode::code_points(s);
}

inline EditCounts word_counts(std::string_view ref, std::string_view hyp, const NormalizationChain& chain,
                              const TableRegistry& tables = builtin_tables()) {
  const auto r = split_words(normalize(ref, chain, tables));
  const auto h = split_words(normalize(hyp, chain, tables));
  if (r.empty()) fail(ErrorKind::EmptyReference, "reference is empty after normalization");
  return align(r, h).counts;
}

inline ScoreReport wer(std::string_view ref, std::string_view hyp, const NormalizationChain& chain = {},
                       const TableRegistry& tables = builtin_tables()) {
  return ScoreReport::from_counts(Metric::WER, word_counts(ref, hyp, chain, tables));
}

// Corpus WER: counts are summed over pairs before dividing.
inline ScoreReport corpus_wer(const std::vector<std::pair<std::string, std::string>>& pairs,
                              const NormalizationChain& chain = {},
                              const TableRegistry& tables = builtin_tables()) {
  EditCounts total;
  for (const auto& [ref, hyp] : pairs) total += word_counts(ref, hyp, chain, tables);
  return ScoreReport::from_counts(Metric::WER, total);
}

inline EditCounts char_counts(std::string_view ref, std::string_view hyp, const NormalizationChain& chain,
                              const CharOptions& opts, const TableRegistry& tables = builtin_tables()) {
  const auto r = split_chars(normalize(ref, chain, tables), opts);
  const auto h = split_chars(normalize(hyp, chain, tables), opts);
  if (r.empty()) fail(ErrorKind::EmptyReference, "reference is empty after normalization");
  return align(r, h).counts;
}

inline ScoreReport cer(std::string_view ref, std::string_view hyp, const NormalizationChain& chain = {},
                       const CharOptions& opts = {}, const TableRegistry& tables = builtin_tables()) {
  return ScoreReport::from_counts(Metric::CER, char_counts(ref, hyp, chain, opts, tables));
}

inline ScoreReport corpus_cer(const std::vector<std::pair<std::string, std::string>>& pairs,
                              const NormalizationChain& chain = {}, const CharOptions& opts = {},
                              const TableRegistry& tables = builtin_tables()) {
  EditCounts total;
  for (const auto& [ref, hyp] : pairs) total += char_counts(ref, hyp, chain, opts, tables);
  return ScoreReport::from_counts(Metric::CER, total);
}

// CER after mapping both sides onto a single orthography. The table is applied
// to NFC text before the chain.
inline ScoreReport normalized_cer(std::string_view ref, std::string_view hyp, const MappingTable& table,
                                  const NormalizationChain& chain = {}, const CharOptions& opts = {},
                                  const TableRegistry& tables = builtin_tables()) {
  const auto r = table.apply(std::string_view(unicode::nfc(ref)));
  const auto h = table.apply(std::string_view(unicode::nfc(hyp)));
  return ScoreReport::from_counts(Metric::NCER, char_counts(r, h, chain, opts, tables));
}

inline ScoreReport corpus_normalized_cer(const std::vector<std::pair<std::string, std::string>>& pairs,
                                         const MappingTable& table, const NormalizationChain& chain = {},
                                         const CharOptions& opts = {},
                                         const TableRegistry& tables = builtin_tables()) {
  EditCounts total;
  for (const auto& [ref, hyp] : pairs) {
    const auto r = table.apply(std::string_view(unicode::nfc(ref)));
    const auto h = table.apply(std::string_view(unicode::nfc(hyp)));
    total += char_counts(r, h, chain, opts, tables);
  }
  return ScoreReport::from_counts(Metric::NCER, total);
}

// B-WER / U-WER split. Empty optionals mean the rate is undefined (no
// reference tokens of that kind).
struct BiasReport {
  double wer = 0.0;
  std::optional<double> u_wer;
  std::optional<double> b_wer;
  std::size_t biased_ref_count = 0;
  std::size_t unbiased_ref_count = 0;
  std::size_t biased_errors = 0;
  std::size_t unbiased_errors = 0;
  EditCounts counts;
};

// A substitution or deletion is biased when its reference word is a bias
// word; an insertion is biased when the inserted word is.
inline BiasReport biased_wer(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::set<std::string>& bias_words, const NormalizationChain& chain = {},
                             const TableRegistry& tables = builtin_tables()) {
  if (pairs.empty()) fail(ErrorKind::InsufficientData, "biased WER needs at least one pair");
  std::set<std::string> bias;
  for (const auto& w : bias_words) {
    for (auto& tok : split_words(normalize(w, chain, tables))) bias.insert(std::move(tok));
  }
  BiasReport rep;
  for (const auto& [ref, hyp] : pairs) {
    const auto r = split_words(normalize(ref, chain, tables));
    const auto h = split_words(normalize(hyp, chain, tables));
    if (r.empty()) fail(ErrorKind::EmptyReference, "reference is empty after normalization");
    for (const auto& tok : r) (bias.count(tok) ? rep.biased_ref_count : rep.unbiased_ref_count)++;
    const auto a = align(r, h);
    rep.counts += a.counts;
    for (const auto& step : a.steps) {
      if (step.op == EditOp::Match) continue;
      const bool biased = step.op == EditOp::Ins ? bias.count(h[*step.hyp_index]) != 0
                                                 : bias.count(r[*step.ref_index]) != 0;
      (biased ? rep.biased_errors : rep.unbiased_errors)++;
    }
  }
  const std::size_t ref_total = rep.biased_ref_count + rep.unbiased_ref_count;
  rep.wer = static_cast<double>(rep.counts.errors()) / static_cast<double>(ref_total);
  if (rep.biased_ref_count > 0) {
    rep.b_wer = static_cast<double>(rep.biased_errors) / static_cast<double>(rep.biased_ref_count);
  }
  if (rep.unbiased_ref_count > 0) {
    rep.u_wer = static_cast<double>(rep.unbiased_errors) / static_cast<double>(rep.unbiased_ref_count);
  }
  return rep;
}

}  // namespace scalebench::metrics
