#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scalebench/compute/arch.hpp"
#include "scalebench/compute/budget.hpp"
#include "scalebench/error.hpp"
#include "scalebench/ingest/fixture.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::ingest {

struct LanguageKey {
  std::string name;
  std::string iso3;
};

namespace detail {

// Matches a table name or ISO3 code, case-insensitively.
inline std::optional<std::size_t> find_language(const std::vector<LanguageKey>& keys, std::string_view query) {
  const auto q = lower_ascii(query);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (lower_ascii(keys[i].name) == q || (!keys[i].iso3.empty() && lower_ascii(keys[i].iso3) == q)) return i;
  }
  return std::nullopt;
}

}  // namespace detail

// Per-language error rates (fractions) at each model size (parameters).
struct WerTable {
  std::vector<std::string> size_labels;
  std::vector<double> sizes;
  std::vector<LanguageKey> languages;  // table order
  std::vector<std::vector<double>> rows;
  std::vector<std::string> groups;
  std::vector<bool> irregular;

  std::size_t index_of(std::string_view lang) const {
    auto i = detail::find_language(languages, lang);
    if (!i) fail(ErrorKind::UnknownLanguage, "language '" + std::string(lang) + "' is not in the WER table");
    return *i;
  }

  const std::vector<double>& row(std::string_view lang) const { return rows[index_of(lang)]; }

  std::size_t size_index(double params) const {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] == params) return i;
    }
    fail(ErrorKind::SchemaError, "model size " + std::to_string(params) + " is not a table column");
  }
};

// Columns: language, iso3 (optional), group (optional), flag (optional), then
// one column per model size label ("0.25B", ...). Cells are percentages.
inline WerTable wer_table_from(const TsvFixture& fx) {
  WerTable t;
  std::size_t first_size = 1;
  const auto has = [&](std::string_view c) {
    return std::find(fx.columns.begin(), fx.columns.end(), c) != fx.columns.end();
  };
  const bool has_iso = has("iso3"), has_group = has("group"), has_flag = has("flag");
  first_size += has_iso + has_group + has_flag;
  for (std::size_t c = first_size; c < fx.columns.size(); ++c) {
    t.size_labels.push_back(fx.columns[c]);
    double v = 0.0;
    try {
      v = parse_size(fx.columns[c]);
    } catch (const Error&) {
      fail(ErrorKind::SchemaError, fx.path + ": column '" + fx.columns[c] + "' is not a model size");
    }
    if (!(v > 0.0)) fail(ErrorKind::SchemaError, fx.path + ": model sizes must be positive");
    if (!t.sizes.empty() && v <= t.sizes.back()) {
      fail(ErrorKind::SchemaError, fx.path + ": model size columns must be increasing");
    }
    t.sizes.push_back(v);
  }
  if (t.sizes.empty()) fail(ErrorKind::SchemaError, fx.path + ": no model size columns");
  for (std::size_t r = 0; r < fx.rows.size(); ++r) {
    const auto& row = fx.rows[r];
    LanguageKey key{row[0], has_iso ? row[fx.column("iso3")] : ""};
    const std::string where = fx.path + " line " + std::to_string(fx.row_lines[r]) + " (" + key.name + ")";
    std::vector<double> values;
    for (std::size_t c = first_size; c < row.size(); ++c) {
      const double v = parse_number(row[c], where) / 100.0;
      if (!(v >= 0.0)) fail(ErrorKind::SchemaError, where + ": negative error rate");
      values.push_back(v);
    }
    if (values.size() != t.sizes.size()) {
      fail(ErrorKind::SchemaError, where + ": row length does not match the size header");
    }
    if (detail::find_language(t.languages, key.name)) {
      fail(ErrorKind::SchemaError, where + ": duplicate language");
    }
    t.languages.push_back(std::move(key));
    t.rows.push_back(std::move(values));
    t.groups.push_back(has_group ? row[fx.column("group")] : "");
    t.irregular.push_back(has_flag && row[fx.column("flag")] == "irregular");
  }
  return t;
}

inline WerTable load_wer_table(const std::string& path, bool require_checksum = false) {
  return wer_table_from(load_fixture(path, require_checksum));
}

// Model-size series for one language; y is a fraction.
inline scaling::ScalingSeries to_series(const WerTable& table, std::string_view lang,
                                        std::string metric = "WER") {
  const auto i = table.index_of(lang);
  std::vector<scaling::Point> pts;
  for (std::size_t c = 0; c < table.sizes.size(); ++c) pts.push_back({table.sizes[c], table.rows[i][c]});
  return scaling::ScalingSeries(scaling::ScaleAxis::ModelParams, std::move(metric), table.languages[i].name,
                                std::move(pts));
}

struct CatalogRow {
  LanguageKey key;
  double hours_base = 0.0;
  double hours_extra = 0.0;

  double total() const noexcept { return hours_base + hours_extra; }
};

class LanguageCatalog {
 public:
  void add(CatalogRow row) {
    if (row.hours_base < 0.0 || row.hours_extra < 0.0) {
      fail(ErrorKind::SchemaError, "negative hours for '" + row.key.name + "'");
    }
    if (detail::find_language(keys_, row.key.name)) fail(ErrorKind::SchemaError, "duplicate language '" + row.key.name + "'");
    keys_.push_back(row.key);
    rows_.push_back(std::move(row));
  }

  const CatalogRow& get(std::string_view lang) const {
    auto i = detail::find_language(keys_, lang);
    if (!i) fail(ErrorKind::UnknownLanguage, "language '" + std::string(lang) + "' is not in the catalog");
    return rows_[*i];
  }

  bool contains(std::string_view lang) const { return detail::find_language(keys_, lang).has_value(); }
  const std::vector<CatalogRow>& rows() const noexcept { return rows_; }

 private:
  std::vector<LanguageKey> keys_;
  std::vector<CatalogRow> rows_;
};

inline LanguageCatalog catalog_from(const TsvFixture& fx) {
  LanguageCatalog cat;
  const auto c_lang = fx.column("language"), c_iso = fx.column("iso3");
  const auto c_base = fx.column("hours_base"), c_extra = fx.column("hours_extra");
  for (std::size_t r = 0; r < fx.rows.size(); ++r) {
    const auto& row = fx.rows[r];
    const std::string where = fx.path + " line " + std::to_string(fx.row_lines[r]);
    CatalogRow cr{{row[c_lang], row[c_iso]}, parse_number(row[c_base], where), parse_number(row[c_extra], where)};
    try {
      cat.add(std::move(cr));
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.what());
    }
  }
  return cat;
}

inline LanguageCatalog load_catalog(const std::string& path, bool require_checksum = false) {
  return catalog_from(load_fixture(path, require_checksum));
}

inline compute::CostTable cost_table_from(const TsvFixture& fx) {
  compute::CostTable table;
  const auto c_model = fx.column("model"), c_beam = fx.column("beam"), c_cost = fx.column("tflops");
  const bool has_wer = std::find(fx.columns.begin(), fx.columns.end(), "wer") != fx.columns.end();
  for (std::size_t r = 0; r < fx.rows.size(); ++r) {
    const auto& row = fx.rows[r];
    const std::string where = fx.path + " line " + std::to_string(fx.row_lines[r]);
    const double beam = parse_number(row[c_beam], where);
    if (beam != static_cast<int>(beam)) fail(ErrorKind::SchemaError, where + ": beam must be an integer");
    compute::CostRow cr{row[c_model], static_cast<int>(beam), parse_number(row[c_cost], where), std::nullopt};
    if (has_wer && !row[fx.column("wer")].empty()) cr.wer = parse_number(row[fx.column("wer")], where);
    try {
      table.add(std::move(cr));
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.what());
    }
  }
  return table;
}

inline compute::CostTable load_cost_table(const std::string& path, bool require_checksum = false) {
  return cost_table_from(load_fixture(path, require_checksum));
}

inline std::vector<compute::ArchConfig> arch_configs_from(const TsvFixture& fx) {
  std::vector<compute::ArchConfig> out;
  for (std::size_t r = 0; r < fx.rows.size(); ++r) {
    const auto& row = fx.rows[r];
    const std::string where = fx.path + " line " + std::to_string(fx.row_lines[r]);
    auto integer = [&](std::string_view col) {
      const double v = parse_number(row[fx.column(col)], where);
      if (v != static_cast<double>(static_cast<std::int64_t>(v))) {
        fail(ErrorKind::SchemaError, where + ": '" + std::string(col) + "' must be an integer");
      }
      return static_cast<std::int64_t>(v);
    };
    compute::ArchConfig c;
    c.label = row[fx.column("label")];
    c.enc_layers = integer("enc_layers");
    c.dec_layers = integer("dec_layers");
    c.hidden = integer("hidden");
    c.ffn = integer("ffn");
    c.heads = integer("heads");
    c.nominal_params = parse_number(row[fx.column("nominal_params")], where);
    try {
      c.validate();
    } catch (const Error& e) {
      fail(ErrorKind::SchemaError, where + ": " + e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<compute::ArchConfig> load_arch_configs(const std::string& path, bool require_checksum = false) {
  return arch_configs_from(load_fixture(path, require_checksum));
}

}  // namespace scalebench::ingest
