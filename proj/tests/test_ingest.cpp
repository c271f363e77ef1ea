#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "scalebench/ingest/fixture.hpp"
#include "scalebench/ingest/manifest.hpp"
#include "scalebench/ingest/report_file.hpp"
#include "scalebench/ingest/tables.hpp"

using namespace scalebench;
using namespace scalebench::ingest;

namespace {

std::string fixture(const std::string& name) { return std::string(SCALEBENCH_DEFAULT_FIXTURES) + "/" + name; }

template <typename Fn>
std::string expect_kind(ErrorKind kind, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
    return e.what();
  }
  return "";
}

Manifest manifest(const std::string& text) {
  std::istringstream in(text);
  return parse_manifest(in);
}

}  // namespace

TEST(Fixture, BundledChecksumsVerify) {
  for (const char* name :
       {"fleurs_wer.tsv", "train_hours.tsv", "beam_costs.tsv", "arch_configs.tsv", "icl_quechua_cer.tsv",
        "contextual_biasing.tsv"}) {
    EXPECT_TRUE(load_fixture(fixture(name), true).checksum_verified) << name;
  }
}

TEST(Fixture, TamperIsDetected) {
  auto text = read_file(fixture("beam_costs.tsv"));
  const auto pos = text.find("48.7");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, "48.8");
  expect_kind(ErrorKind::SchemaError, [&] { parse_fixture(text, "x", true); });
}

TEST(Fixture, SealRoundTrip) {
  const auto sealed = seal_fixture("a\tb\n1\t2\n");
  const auto fx = parse_fixture(sealed, "mem", true);
  EXPECT_TRUE(fx.checksum_verified);
  EXPECT_EQ(fx.rows.size(), 1u);
  expect_kind(ErrorKind::SchemaError, [] { parse_fixture("a\tb\n1\t2\n", "mem", true); });
  expect_kind(ErrorKind::SchemaError, [] { parse_fixture("a\tb\n1\n", "mem", false); });
}

TEST(Fixture, SizeSuffixes) {
  EXPECT_DOUBLE_EQ(parse_size("0.25B"), 2.5e8);
  EXPECT_DOUBLE_EQ(parse_size("18b"), 1.8e10);
  EXPECT_DOUBLE_EQ(parse_size("300M"), 3e8);
  EXPECT_DOUBLE_EQ(parse_size("42"), 42);
  expect_kind(ErrorKind::UsageError, [] { parse_size("1Q"); });
}

TEST(WerTableFixture, EnglishAndRussian) {
  const auto t = load_wer_table(fixture("fleurs_wer.tsv"), true);
  const auto en = to_series(t, "English");
  const std::vector<double> want{0.168, 0.118, 0.097, 0.095, 0.085, 0.085, 0.077};
  ASSERT_EQ(en.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(en.ys()[i], want[i], 1e-12);
  EXPECT_DOUBLE_EQ(en.xs().front(), 2.5e8);
  const auto ru = to_series(t, "rus");
  EXPECT_EQ(ru.size(), 7u);
  EXPECT_NEAR(ru.ys().back(), 0.145, 1e-12);
  expect_kind(ErrorKind::UnknownLanguage, [&] { to_series(t, "Klingon"); });
}

TEST(WerTableFixture, RowLengthMismatchNamesLanguage) {
  const auto text = seal_fixture("language\t1B\t2B\nFoo\t1\t2\nBar\t3\n");
  const auto msg = expect_kind(ErrorKind::SchemaError, [&] { parse_fixture(text, "mem", false); });
  EXPECT_NE(msg.find("line 3"), std::string::npos);
  EXPECT_NE(msg.find("Bar"), std::string::npos);
}

TEST(Catalog, Lookups) {
  const auto c = load_catalog(fixture("train_hours.tsv"), true);
  EXPECT_DOUBLE_EQ(c.get("English").hours_base, 73000);
  EXPECT_DOUBLE_EQ(c.get("English").hours_extra, 75000);
  EXPECT_DOUBLE_EQ(c.get("Korean").hours_base, 1000);
  EXPECT_DOUBLE_EQ(c.get("kor").hours_extra, 10890);
  expect_kind(ErrorKind::UnknownLanguage, [&] { c.get("Quechua"); });
  LanguageCatalog bad;
  expect_kind(ErrorKind::SchemaError, [&] { bad.add({{"x", "xxx"}, -1, 0}); });
}

TEST(CostTableFixture, Rows) {
  const auto t = load_cost_table(fixture("beam_costs.tsv"), true);
  EXPECT_EQ(t.models(), (std::vector<std::string>{"0.25B", "2B", "4B", "9B"}));
  EXPECT_EQ(t.rows().size(), 4u);
}

TEST(ArchFixture, MatchesBuiltins) {
  const auto file = load_arch_configs(fixture("arch_configs.tsv"), true);
  const auto builtin = compute::builtin_configs();
  ASSERT_EQ(file.size(), builtin.size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    EXPECT_EQ(compute::count_params(file[i]), compute::count_params(builtin[i])) << file[i].label;
  }
}

TEST(Manifest, ValidRows) {
  auto m = manifest(
      R"({"utt_id":"u1","lang":"eng","model_label":"1B","size_params":1e9,"task":"asr","ref":"a b","hyp":"a"})"
      "\n"
      R"({"utt_id":"u2","lang":"eng","model_label":"1B","size_params":"1B","task":"asr","ref":"c","hyp":""})"
      "\n"
      R"({"utt_id":"u3","lang":"deu","model_label":"9B","size_params":"9B","task":"st","ref":"d","hyp":"d"})"
      "\n");
  EXPECT_EQ(m.rows.size(), 3u);
  EXPECT_TRUE(m.errors.empty());
  EXPECT_DOUBLE_EQ(m.rows[2].size_params, 9e9);
}

TEST(Manifest, MissingFieldIsLocated) {
  auto m = manifest(
      R"({"utt_id":"u1","lang":"eng","model_label":"1B","size_params":1e9,"task":"asr","ref":"a","hyp":"a"})"
      "\n"
      R"({"utt_id":"u2","lang":"eng","model_label":"1B","size_params":1e9,"task":"asr","hyp":"a"})"
      "\n{not json\n");
  EXPECT_EQ(m.rows.size(), 1u);
  ASSERT_EQ(m.errors.size(), 2u);
  EXPECT_EQ(m.errors[0].line, 2);
  EXPECT_EQ(m.errors[0].field, "ref");
  EXPECT_EQ(m.errors[1].line, 3);
}

TEST(Manifest, EmptyAndMissingFile) {
  auto m = manifest("");
  EXPECT_TRUE(m.rows.empty());
  EXPECT_TRUE(m.errors.empty());
  expect_kind(ErrorKind::IoError, [] { load_manifest("/nonexistent/manifest.jsonl"); });
}

namespace {

FitReportFile sample_report() {
  FitReportFile r;
  r.axis = "model_params";
  r.metric = "WER";
  r.label = "English";
  r.points = {{2.5e8, 0.168}, {5e8, 0.118}, {1e9, 0.1 / 3}};
  r.fit.alpha = -0.1552988471903996;
  r.fit.beta = 2.8035712345678;
  r.fit.r_squared = 0.8181772852996084;
  r.fit.r_squared_linear = 0.79;
  r.fit.n_points = 3;
  r.loss_fit = scaling::LossCurveFit{0.01, -0.3, 1.5, 0.9, 3};
  scaling::ConfidenceInterval ci;
  ci.lo = -0.26;
  ci.hi = -0.07;
  ci.n_resamples = 1000;
  ci.seed = 18446744073709551615ull;
  r.alpha_ci = ci;
  r.provenance = {"table:fleurs_wer.tsv"};
  return r;
}

}  // namespace

TEST(Report, RoundTripIsLossless) {
  const auto r = sample_report();
  EXPECT_EQ(parse_report(dump_report(r)), r);
  const auto path = (std::filesystem::temp_directory_path() / "scalebench_report.json").string();
  save_report(r, path);
  EXPECT_EQ(load_report(path), r);
  std::filesystem::remove(path);
}

TEST(Report, FutureVersionAndTruncation) {
  auto j = to_json(sample_report());
  j["schema_version"] = kReportSchemaVersion + 1;
  expect_kind(ErrorKind::VersionError, [&] { parse_report(j.dump()); });
  const auto text = dump_report(sample_report());
  expect_kind(ErrorKind::SchemaError, [&] { parse_report(text.substr(0, text.size() / 2)); });
  expect_kind(ErrorKind::SchemaError, [&] { parse_report(R"({"schema_version":1})"); });
}
