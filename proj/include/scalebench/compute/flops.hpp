#pragma once

#include <cstdint>

#include "scalebench/compute/arch.hpp"
#include "scalebench/error.hpp"

namespace scalebench::compute {

// FLOPS per utterance; one multiply-accumulate counts as 2 FLOPS.
struct FlopsEstimate {
  double encoder_flops = 0.0;
  double decoder_flops = 0.0;
  double attention_flops = 0.0;
  double total = 0.0;
};

struct DecodeSettings {
  std::int64_t beam = 1;
  std::int64_t out_len = 30;
  double audio_seconds = 30.0;
  bool kv_cache = true;
  bool include_attention = true;
};

inline FlopsEstimate estimate_decode_flops(const ArchConfig& c, const DecodeSettings& s) {
  if (s.beam < 1) fail(ErrorKind::DomainError, "beam must be at least 1");
  if (s.out_len < 1) fail(ErrorKind::DomainError, "out_len must be at least 1");
  const auto params = count_params(c);
  const auto t_enc = static_cast<double>(encoder_frames(c, s.audio_seconds));
  const auto beam = static_cast<double>(s.beam);
  const auto len = static_cast<double>(s.out_len);
  const double tokens = s.kv_cache ? len : len * (len + 1.0) / 2.0;
  const double decoder_side =
      static_cast<double>(params.decoder + params.embedding + params.output_projection);

  FlopsEstimate f;
  f.encoder_flops = 2.0 * static_cast<double>(params.encoder) * t_enc;
  f.decoder_flops = 2.0 * decoder_side * tokens * beam;
  if (s.include_attention) {
    const auto d = static_cast<double>(c.hidden);
    f.attention_flops = 4.0 * d *
                        (static_cast<double>(c.enc_layers) * t_enc * t_enc +
                         beam * static_cast<double>(c.dec_layers) * (len * len + len * t_enc));
  }
  f.total = f.encoder_flops + f.decoder_flops + f.attention_flops;
  return f;
}

// 6 N D: forward + backward over `tokens` training tokens.
inline double estimate_train_flops(const ArchConfig& c, double tokens) {
  if (!(tokens > 0.0)) fail(ErrorKind::DomainError, "tokens must be positive");
  return 6.0 * static_cast<double>(count_params(c).total) * tokens;
}

inline double estimate_train_flops(double total_params, double tokens) {
  if (!(tokens > 0.0) || !(total_params > 0.0)) {
    fail(ErrorKind::DomainError, "tokens and params must be positive");
  }
  return 6.0 * total_params * tokens;
}

}  // namespace scalebench::compute
