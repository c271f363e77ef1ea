#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "scalebench/error.hpp"

// Thin UTF-8 helpers over ICU. Ill-formed UTF-8 decodes to U+FFFD.
namespace scalebench::metrics::unicode {

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto n = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

inline void append(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), err);
  if (err) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) append(out, c);
  return out;
}

inline std::string to_utf8(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline const icu::Normalizer2& normalizer(bool compat) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = compat ? icu::Normalizer2::getNFKCInstance(status)
                                     : icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) fail(ErrorKind::IoError, "ICU normalizer unavailable");
  return *n;
}

inline std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  auto out = normalizer(false).normalize(u, status);
  if (U_FAILURE(status)) fail(ErrorKind::DomainError, "NFC normalization failed");
  return to_utf8(out);
}

inline std::string nfkc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  auto out = normalizer(true).normalize(u, status);
  if (U_FAILURE(status)) fail(ErrorKind::DomainError, "NFKC normalization failed");
  return to_utf8(out);
}

inline std::string to_lower(std::string_view s) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

inline bool is_punct(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)); }
inline bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

// Each code point as its own UTF-8 string.
inline std::vector<std::string> code_points(std::string_view s) {
  std::vector<std::string> out;
  for (char32_t c : decode(s)) {
    std::string one;
    append(one, c);
    out.push_back(std::move(one));
  }
  return out;
}

// Extended grapheme clusters (UAX #29) via the ICU character break iterator.
inline std::vector<std::string> graphemes(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status)) fail(ErrorKind::IoError, "ICU break iterator unavailable");
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  it->setText(u);
  std::vector<std::string> out;
  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE; start = end, end = it->next()) {
    out.push_back(to_utf8(icu::UnicodeString(u, start, end - start)));
  }
  return out;
}

}  // namespace scalebench::metrics::unicode
