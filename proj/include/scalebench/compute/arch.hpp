#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::compute {

// Encoder-decoder transformer shape plus the speech front-end constants.
struct ArchConfig {
  std::string label;
  std::int64_t enc_layers = 0;
  std::int64_t dec_layers = 0;
  std::int64_t hidden = 0;
  std::int64_t ffn = 0;
  std::int64_t heads = 1;
  std::int64_t vocab = 50'000;
  std::int64_t feature_dim = 80;
  double frame_shift_ms = 10.0;
  std::int64_t downsample = 4;
  double max_audio_s = 30.0;
  double nominal_params = 0.0;

  void validate() const {
    if (enc_layers < 0 || dec_layers < 0) fail(ErrorKind::DomainError, "layer counts must be nonnegative");
    if (hidden <= 0 || ffn <= 0 || heads <= 0 || vocab <= 0 || feature_dim <= 0 || downsample <= 0) {
      fail(ErrorKind::DomainError, "config '" + label + "': dimensions must be positive");
    }
    if (hidden % heads != 0) {
      fail(ErrorKind::DomainError, "config '" + label + "': hidden must be divisible by heads");
    }
    if (!(frame_shift_ms > 0.0) || !(max_audio_s > 0.0)) {
      fail(ErrorKind::DomainError, "config '" + label + "': frame shift and max audio must be positive");
    }
  }

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

struct ParamBreakdown {
  std::int64_t encoder = 0;
  std::int64_t decoder = 0;
  std::int64_t embedding = 0;
  std::int64_t output_projection = 0;
  std::int64_t ctc_head = 0;
  std::int64_t total = 0;

  friend bool operator==(const ParamBreakdown&, const ParamBreakdown&) = default;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorKind::ArithmeticError, "parameter count overflows int64");
  return out;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorKind::ArithmeticError, "parameter count overflows int64");
  return out;
}

}  // namespace detail

// Weight matrices only: biases, layer norms and the conv front-end are not
// counted. Input embedding, output projection and CTC head are untied.
//   encoder layer: self-attention 4d^2 + FFN 2 d ffn
//   decoder layer: self + cross attention 8d^2 + FFN 2 d ffn
inline ParamBreakdown count_params(const ArchConfig& c) {
  using detail::checked_add;
  using detail::checked_mul;
  c.validate();
  const std::int64_t d2 = checked_mul(c.hidden, c.hidden);
  const std::int64_t ffn = checked_mul(2, checked_mul(c.hidden, c.ffn));
  const std::int64_t enc_layer = checked_add(checked_mul(4, d2), ffn);
  const std::int64_t dec_layer = checked_add(checked_mul(8, d2), ffn);
  ParamBreakdown p;
  p.encoder = checked_mul(c.enc_layers, enc_layer);
  p.decoder = checked_mul(c.dec_layers, dec_layer);
  p.embedding = checked_mul(c.vocab, c.hidden);
  p.output_projection = p.embedding;
  p.ctc_head = p.embedding;
  p.total = checked_add(checked_add(checked_add(p.encoder, p.decoder), p.embedding),
                        checked_add(p.output_projection, p.ctc_head));
  return p;
}

inline std::int64_t encoder_frames(const ArchConfig& c, double audio_seconds) {
  if (!(audio_seconds > 0.0)) fail(ErrorKind::DomainError, "audio_seconds must be positive");
  const double frames = audio_seconds * 1000.0 / c.frame_shift_ms / static_cast<double>(c.downsample);
  // absorb representation error at exact multiples
  return static_cast<std::int64_t>(std::floor(frames * (1.0 + 1e-12)));
}

inline ArchConfig make_config(std::string label, std::int64_t layers, std::int64_t hidden,
                              std::int64_t ffn, std::int64_t heads, double nominal) {
  ArchConfig c;
  c.label = std::move(label);
  c.enc_layers = layers;
  c.dec_layers = layers;
  c.hidden = hidden;
  c.ffn = ffn;
  c.heads = heads;
  c.nominal_params = nominal;
  return c;
}

// The seven published model sizes (equal encoder and decoder depth).
inline std::vector<ArchConfig> builtin_configs() {
  return {
      make_config("0.25B", 8, 768, 3072, 16, 0.25e9),
      make_config("0.50B", 16, 1024, 4096, 16, 0.5e9),
      make_config("1B", 32, 1024, 4096, 16, 1e9),
      make_config("2B", 16, 2048, 8192, 64, 2e9),
      make_config("4B", 36, 2048, 8192, 64, 4e9),
      make_config("9B", 39, 2816, 11264, 64, 9e9),
      make_config("18B", 64, 3072, 12288, 64, 18e9),
  };
}

}  // namespace scalebench::compute
