#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "scalebench/error.hpp"

namespace scalebench::icl {

// Mono PCM16 audio.
struct WavData {
  std::uint32_t sample_rate = 16000;
  std::vector<std::int16_t> samples;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }

  friend bool operator==(const WavData&, const WavData&) = default;
};

namespace detail {

inline std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}
inline void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

[[noreturn]] inline void unsupported(const std::string& field, const std::string& what) {
  fail(ErrorKind::UnsupportedFormat, field + ": " + what);
}

}  // namespace detail

// Parses a RIFF/WAVE byte buffer. Only PCM16 mono is accepted; unknown chunks
// are skipped.
inline WavData parse_wav(const std::vector<unsigned char>& bytes) {
  using detail::le16;
  using detail::le32;
  if (bytes.size() < 12) detail::unsupported("RIFF header", "file shorter than 12 bytes");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) detail::unsupported("RIFF header", "missing 'RIFF' tag");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) detail::unsupported("RIFF header", "missing 'WAVE' form type");

  bool have_fmt = false;
  WavData out;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::string id(reinterpret_cast<const char*>(chunk), 4);
    if (id == "fmt ") {
      if (size < 16 || body + 16 > bytes.size()) detail::unsupported("fmt chunk", "truncated");
      const std::uint16_t format = le16(bytes.data() + body);
      const std::uint16_t channels = le16(bytes.data() + body + 2);
      const std::uint32_t rate = le32(bytes.data() + body + 4);
      const std::uint16_t bits = le16(bytes.data() + body + 14);
      if (format != 1) detail::unsupported("format tag", std::to_string(format) + " is not PCM (1)");
      if (channels != 1) detail::unsupported("channels", std::to_string(channels) + " (mono required)");
      if (bits != 16) detail::unsupported("bits per sample", std::to_string(bits) + " (16 required)");
      if (rate == 0) detail::unsupported("sample rate", "zero");
      out.sample_rate = rate;
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) detail::unsupported("data chunk", "appears before fmt chunk");
      if (body + size > bytes.size()) {
        detail::unsupported("data chunk", "declares " + std::to_string(size) + " bytes but only " +
                                              std::to_string(bytes.size() - body) + " remain");
      }
      if (size % 2 != 0) detail::unsupported("data chunk", "odd byte count for PCM16");
      out.samples.resize(size / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i));
      }
      return out;
    }
    pos = body + size + (size & 1u);
  }
  detail::unsupported(have_fmt ? "data chunk" : "fmt chunk", "missing");
}

inline std::vector<unsigned char> serialize_wav(const WavData& wav) {
  using detail::put16;
  using detail::put32;
  const auto data_bytes = static_cast<std::uint32_t>(wav.samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, wav.sample_rate);
  put32(out, wav.sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_bytes);
  for (std::int16_t s : wav.samples) put16(out, static_cast<std::uint16_t>(s));
  return out;
}

inline WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

inline void write_wav(const std::string& path, const WavData& wav) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  const auto bytes = serialize_wav(wav);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::IoError, "short write to '" + path + "'");
}

}  // namespace scalebench::icl
