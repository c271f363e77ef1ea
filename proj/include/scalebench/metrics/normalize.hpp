#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/metrics/unicode.hpp"

namespace scalebench::metrics {

// Source -> target code-point sequences, applied left to right with the
// longest matching source first. A single pass never re-maps its own output.
class MappingTable {
 public:
  MappingTable() = default;
  explicit MappingTable(std::string name) : name_(std::move(name)) {}

  void add(std::string_view source, std::string_view target) {
    auto src = unicode::decode(source);
    if (src.empty()) fail(ErrorKind::SchemaError, "table '" + name_ + "': empty source entry");
    max_len_ = std::max(max_len_, src.size());
    entries_[std::move(src)] = unicode::decode(target);
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::u32string apply(std::u32string_view text) const {
    if (entries_.empty()) return std::u32string(text);
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
      bool matched = false;
      for (std::size_t len = std::min(max_len_, text.size() - i); len > 0; --len) {
        auto it = entries_.find(std::u32string(text.substr(i, len)));
        if (it != entries_.end()) {
          out += it->second;
          i += len;
          matched = true;
          break;
        }
      }
      if (!matched) out.push_back(text[i++]);
    }
    return out;
  }

  std::string apply(std::string_view text) const { return unicode::encode(apply(unicode::decode(text))); }

  // Rejects tables where following source -> target links returns to a
  // source already visited (self-maps are allowed).
  void check_acyclic() const {
    std::map<std::u32string, int> state;  // 0 unvisited, 1 on stack, 2 done
    std::function<void(const std::u32string&)> visit = [&](const std::u32string& key) {
      state[key] = 1;
      const auto& target = entries_.at(key);
      if (target != key && entries_.count(target)) {
        const int s = state[target];
        if (s == 1) fail(ErrorKind::SchemaError, "table '" + name_ + "' contains a mapping cycle");
        if (s == 0) visit(target);
      }
      state[key] = 2;
    };
    for (const auto& [key, _] : entries_) {
      if (state[key] == 0) visit(key);
    }
  }

 private:
  std::string name_;
  std::map<std::u32string, std::u32string> entries_;
  std::size_t max_len_ = 0;
};

// Two-column UTF-8 file: source<TAB>target, '#' comments and blank lines ignored.
inline MappingTable parse_mapping_table(std::istream& in, std::string name) {
  MappingTable table(std::move(name));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      fail(ErrorKind::SchemaError, "table '" + table.name() + "' line " + std::to_string(line_no) +
                                       ": expected source<TAB>target");
    }
    table.add(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
  }
  table.check_acyclic();
  return table;
}

inline MappingTable load_mapping_table(const std::string& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open mapping table '" + path + "'");
  return parse_mapping_table(in, std::move(name));
}

// Small demonstration tables; not exhaustive.
inline MappingTable builtin_trad2simp() {
  MappingTable t("trad2simp");
  static constexpr std::string_view pairs[][2] = {
      {"詩", "诗"}, {"語", "语"}, {"學", "学"}, {"國", "国"}, {"說", "说"}, {"時", "时"},
      {"書", "书"}, {"車", "车"}, {"門", "门"}, {"東", "东"}, {"長", "长"}, {"橋", "桥"},
      {"話", "话"}, {"體", "体"}, {"臺", "台"}, {"灣", "湾"}, {"會", "会"}, {"來", "来"},
      {"們", "们"}, {"個", "个"}, {"對", "对"}, {"這", "这"}, {"為", "为"}, {"還", "还"},
      {"開", "开"}, {"關", "关"}, {"見", "见"}, {"電", "电"}, {"華", "华"}, {"漢", "汉"},
      {"風", "风"}, {"飛", "飞"}, {"馬", "马"}, {"鳥", "鸟"}, {"魚", "鱼"}, {"龍", "龙"},
      {"愛", "爱"}, {"氣", "气"}, {"樂", "乐"}, {"聽", "听"}, {"讀", "读"}, {"寫", "写"},
      {"買", "买"}, {"賣", "卖"}, {"錢", "钱"}, {"號", "号"},
  };
  for (const auto& p : pairs) t.add(p[0], p[1]);
  return t;
}

inline MappingTable builtin_kata2hira() {
  MappingTable t("kata2hira");
  for (char32_t c = 0x30A1; c <= 0x30F6; ++c) {
    t.add(unicode::encode(std::u32string(1, c)), unicode::encode(std::u32string(1, c - 0x60)));
  }
  return t;
}

class TableRegistry {
 public:
  static TableRegistry with_builtins() {
    TableRegistry r;
    r.add(builtin_trad2simp());
    r.add(builtin_kata2hira());
    return r;
  }

  void add(MappingTable table) {
    auto name = table.name();
    tables_.insert_or_assign(std::move(name), std::move(table));
  }

  const MappingTable& get(const std::string& name) const {
    auto it = tables_.find(name);
    if (it == tables_.end()) fail(ErrorKind::UnknownTable, "unknown mapping table '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return tables_.count(name) != 0; }

 private:
  std::map<std::string, MappingTable> tables_;
};

inline const TableRegistry& builtin_tables() {
  static const TableRegistry registry = TableRegistry::with_builtins();
  return registry;
}

struct NormStep {
  enum class Kind { Lowercase, StripPunctuation, WidthFold, CollapseWhitespace, RemoveWhitespace, MapTable };
  Kind kind = Kind::Lowercase;
  std::string table;  // MapTable only

  friend bool operator==(const NormStep&, const NormStep&) = default;
};

struct NormalizationChain {
  std::vector<NormStep> steps;

  bool empty() const noexcept { return steps.empty(); }

  // Comma-separated step names; "map:<table>" for table steps.
  static NormalizationChain parse(std::string_view spec) {
    NormalizationChain chain;
    std::string item;
    std::stringstream ss{std::string(spec)};
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      using K = NormStep::Kind;
      if (item == "lowercase") chain.steps.push_back({K::Lowercase, {}});
      else if (item == "strip_punctuation") chain.steps.push_back({K::StripPunctuation, {}});
      else if (item == "width_fold") chain.steps.push_back({K::WidthFold, {}});
      else if (item == "collapse_whitespace") chain.steps.push_back({K::CollapseWhitespace, {}});
      else if (item == "remove_whitespace") chain.steps.push_back({K::RemoveWhitespace, {}});
      else if (item.rfind("map:", 0) == 0) chain.steps.push_back({K::MapTable, item.substr(4)});
      else fail(ErrorKind::UsageError, "unknown normalization step '" + item + "'");
    }
    return chain;
  }

  static NormalizationChain standard() {
    return parse("lowercase,strip_punctuation,collapse_whitespace");
  }
};

namespace detail {

inline bool in_width_block(char32_t c) { return c == 0x3000 || (c >= 0xFF00 && c <= 0xFFEF); }

// NFKC restricted to the halfwidth/fullwidth forms block and the ideographic
// space; everything else passes through untouched.
inline std::string width_fold(std::string_view text) {
  const auto cps = unicode::decode(text);
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!in_width_block(cps[i])) {
      unicode::append(out, cps[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && in_width_block(cps[j])) ++j;
    out += unicode::nfkc(unicode::encode(std::u32string_view(cps).substr(i, j - i)));
    i = j;
  }
  return out;
}

inline std::string filter(std::string_view text, bool (*drop)(char32_t)) {
  std::u32string kept;
  for (char32_t c : unicode::decode(text)) {
    if (!drop(c)) kept.push_back(c);
  }
  return unicode::encode(kept);
}

inline std::string collapse_whitespace(std::string_view text) {
  std::u32string out;
  bool pending = false;
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return unicode::encode(out);
}

}  // namespace detail

inline std::string normalize(std::string_view text, const NormalizationChain& chain,
                             const TableRegistry& tables = builtin_tables()) {
  std::string cur(text);
  for (const auto& step : chain.steps) {
    switch (step.kind) {
      case NormStep::Kind::Lowercase: cur = unicode::to_lower(cur); break;
      case NormStep::Kind::StripPunctuation: cur = detail::filter(cur, unicode::is_punct); break;
      case NormStep::Kind::WidthFold: cur = detail::width_fold(cur); break;
      case NormStep::Kind::CollapseWhitespace: cur = detail::collapse_whitespace(cur); break;
      case NormStep::Kind::RemoveWhitespace: cur = detail::filter(cur, unicode::is_space); break;
      case NormStep::Kind::MapTable: cur = tables.get(step.table).apply(std::string_view(cur)); break;
    }
  }
  return cur;
}

}  // namespace scalebench::metrics
