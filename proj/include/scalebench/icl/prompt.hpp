#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/icl/store.hpp"
#include "scalebench/icl/wav.hpp"

namespace scalebench::icl {

inline constexpr double kDefaultGapSeconds = 0.5;
inline constexpr const char* kTranscriptSeparator = ", ";

struct TargetAudio {
  std::string audio_ref;
  int sample_rate = 16000;
  double duration_s = 0.0;
};

struct PromptSegment {
  std::optional<std::string> source_id;  // empty for the target utterance
  std::string audio_ref;
  double start_offset_s = 0.0;
  double duration_s = 0.0;

  bool is_target() const noexcept { return !source_id.has_value(); }
};

struct PromptPlan {
  std::string decoder_prefix;
  std::vector<PromptSegment> segments;
  double gap_s = kDefaultGapSeconds;
  int sample_rate = 16000;
  double total_duration_s = 0.0;
};

// Examples keep the caller's order (nearest first when taken from knn); the
// target utterance always comes last.
inline PromptPlan build_prompt(const std::vector<EmbeddingRecord>& examples, const TargetAudio& target,
                               double gap_s = kDefaultGapSeconds) {
  if (!(gap_s >= 0.0)) fail(ErrorKind::DomainError, "gap must be nonnegative");
  if (!(target.duration_s > 0.0)) fail(ErrorKind::DomainError, "target duration must be positive");
  PromptPlan plan;
  plan.gap_s = gap_s;
  plan.sample_rate = target.sample_rate;
  double offset = 0.0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.sample_rate != target.sample_rate) {
      fail(ErrorKind::SampleRateMismatch, "example '" + ex.id + "' is " + std::to_string(ex.sample_rate) +
                                              " Hz, target is " + std::to_string(target.sample_rate) + " Hz");
    }
    if (i > 0) plan.decoder_prefix += kTranscriptSeparator;
    plan.decoder_prefix += ex.transcript;
    plan.segments.push_back({ex.id, ex.audio_ref, offset, ex.duration_s});
    offset += ex.duration_s + gap_s;
  }
  plan.segments.push_back({std::nullopt, target.audio_ref, offset, target.duration_s});
  plan.total_duration_s = offset + target.duration_s;
  return plan;
}

inline std::vector<EmbeddingRecord> retrieve_examples(const EmbeddingStore& store, const std::vector<double>& query,
                                                      std::size_t k) {
  std::vector<EmbeddingRecord> out;
  if (k == 0) return out;
  for (const auto& n : knn(store, query, k).neighbors) out.push_back(store.get(n.id));
  return out;
}

using AudioLoader = std::function<WavData(const std::string& audio_ref)>;

// Concatenates segment audio with gap_s of digital silence between segments.
inline WavData concat_audio(const PromptPlan& plan, const AudioLoader& loader) {
  WavData out;
  out.sample_rate = static_cast<std::uint32_t>(plan.sample_rate);
  const auto gap = static_cast<std::size_t>(std::llround(plan.gap_s * plan.sample_rate));
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    const auto& seg = plan.segments[i];
    const WavData clip = loader(seg.audio_ref);
    if (clip.sample_rate != out.sample_rate) {
      fail(ErrorKind::SampleRateMismatch, "'" + seg.audio_ref + "' is " + std::to_string(clip.sample_rate) +
                                              " Hz, plan is " + std::to_string(out.sample_rate) + " Hz");
    }
    if (i > 0) out.samples.insert(out.samples.end(), gap, std::int16_t{0});
    out.samples.insert(out.samples.end(), clip.samples.begin(), clip.samples.end());
  }
  return out;
}

inline AudioLoader file_loader() {
  return [](const std::string& path) { return read_wav(path); };
}

}  // namespace scalebench::icl
