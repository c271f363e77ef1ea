#include <gtest/gtest.h>

#include "oracles.hpp"
#include "scalebench/compute/arch.hpp"
#include "scalebench/compute/budget.hpp"
#include "scalebench/compute/flops.hpp"

using namespace scalebench;
using namespace scalebench::compute;

namespace {

const ArchConfig& config(const std::string& label) {
  static const auto all = builtin_configs();
  for (const auto& c : all) {
    if (c.label == label) return c;
  }
  throw std::runtime_error("no config " + label);
}

CostTable paper_costs() {
  CostTable t;
  t.add({"0.25B", 10, 48.7, 8.33});
  t.add({"2B", 4, 36.2, 4.69});
  t.add({"4B", 2, 42.3, 4.52});
  t.add({"9B", 1, 47.7, 4.52});
  return t;
}

}  // namespace

TEST(Params, MatchesClosedForm) {
  for (const auto& c : builtin_configs()) {
    EXPECT_EQ(count_params(c).total, oracle::params(c.enc_layers, c.dec_layers, c.hidden, c.ffn)) << c.label;
  }
  EXPECT_EQ(count_params(config("0.25B")).total, 247320576);
  EXPECT_EQ(count_params(config("18B")).total, 17372233728);
}

TEST(Params, EmbeddingsOnly) {
  auto c = config("0.25B");
  c.enc_layers = c.dec_layers = 0;
  EXPECT_EQ(count_params(c).total, 3 * 50000 * 768);
}

TEST(Params, OverflowIsReported) {
  auto c = config("18B");
  c.hidden = std::int64_t{1} << 40;
  c.ffn = std::int64_t{1} << 40;
  try {
    count_params(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArithmeticError);
  }
}

TEST(Frames, Examples) {
  ArchConfig c = config("1B");
  EXPECT_EQ(encoder_frames(c, 30), 750);
  EXPECT_EQ(encoder_frames(c, 1), 25);
  c.frame_shift_ms = 20;
  c.downsample = 2;
  EXPECT_EQ(encoder_frames(c, 30), 750);
}

TEST(Flops, LinearInBeam) {
  DecodeSettings one, two, four;
  two.beam = 2;
  four.beam = 4;
  const auto a = estimate_decode_flops(config("2B"), one);
  const auto b = estimate_decode_flops(config("2B"), two);
  const auto d = estimate_decode_flops(config("2B"), four);
  EXPECT_DOUBLE_EQ(b.encoder_flops, a.encoder_flops);
  EXPECT_DOUBLE_EQ(b.decoder_flops, 2 * a.decoder_flops);
  // Encoder self-attention does not depend on the beam; the decoder share does.
  const double per_beam = b.attention_flops - a.attention_flops;
  EXPECT_GT(per_beam, 0.0);
  EXPECT_DOUBLE_EQ(d.attention_flops - b.attention_flops, 2 * per_beam);
}

TEST(Flops, EncoderTerm) {
  DecodeSettings s;
  s.out_len = 100;
  s.include_attention = false;
  const auto& c = config("1B");
  const auto f = estimate_decode_flops(c, s);
  EXPECT_DOUBLE_EQ(f.encoder_flops, 2.0 * static_cast<double>(count_params(c).encoder) * 750);
  EXPECT_DOUBLE_EQ(f.attention_flops, 0.0);
}

TEST(Flops, CacheIrrelevantForOneStep) {
  DecodeSettings on, off;
  on.out_len = off.out_len = 1;
  off.kv_cache = false;
  EXPECT_DOUBLE_EQ(estimate_decode_flops(config("4B"), on).total, estimate_decode_flops(config("4B"), off).total);
  on.out_len = off.out_len = 30;
  EXPECT_GT(estimate_decode_flops(config("4B"), off).total, estimate_decode_flops(config("4B"), on).total);
}

TEST(Flops, Training) {
  EXPECT_DOUBLE_EQ(estimate_train_flops(1e9, 1e9), 6e18);
  EXPECT_DOUBLE_EQ(estimate_train_flops(config("0.25B"), 1e6), 1.483923456e15);
}

TEST(Calibrate, ExactRatios) {
  auto t = paper_costs();
  std::map<std::pair<std::string, int>, double> est;
  for (const auto& r : t.rows()) est[{r.model_label, r.beam}] = r.tflops / 2;
  for (const auto& [m, k] : calibrate(t, est)) EXPECT_DOUBLE_EQ(k, 2.0) << m;
}

TEST(Calibrate, PaperTableAgainstAnalyticEstimate) {
  auto t = paper_costs();
  std::map<std::pair<std::string, int>, double> est;
  for (const auto& r : t.rows()) {
    DecodeSettings s;
    s.beam = r.beam;
    est[{r.model_label, r.beam}] = estimate_decode_flops(config(r.model_label), s).total / 1e12;
  }
  const auto k = calibrate(t, est);
  EXPECT_NEAR(k.at("0.25B"), 248.6115, 1e-3);
  EXPECT_NEAR(k.at("2B"), 22.6136, 1e-3);
  EXPECT_NEAR(k.at("4B"), 13.1690, 1e-3);
  EXPECT_NEAR(k.at("9B"), 7.77135, 1e-4);
}

TEST(Calibrate, Degenerate) {
  auto t = paper_costs();
  std::map<std::pair<std::string, int>, double> zero;
  for (const auto& r : t.rows()) zero[{r.model_label, r.beam}] = 0.0;
  try {
    calibrate(t, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateCalibration);
  }
}

TEST(Balance, PaperTable) {
  const auto r = balance_budget({"0.25B", "2B", "4B", "9B"}, paper_costs(), 36, 50);
  const std::vector<DecodePlan> want{
      {"0.25B", 10, 48.7, false}, {"2B", 4, 36.2, false}, {"4B", 2, 42.3, false}, {"9B", 1, 47.7, false}};
  EXPECT_EQ(r.plans, want);
  EXPECT_TRUE(r.infeasible.empty());
}

TEST(Balance, LinearEstimator) {
  CostEstimator est{[](const std::string&, int beam) { return static_cast<double>(beam); }, 64};
  const auto r = balance_budget({"m"}, est, 0, 7.5);
  ASSERT_EQ(r.plans.size(), 1u);
  EXPECT_EQ(r.plans[0].beam, 7);
}

TEST(Balance, PicksMostExpensiveUnderCapAndFlagsInfeasible) {
  CostTable t;
  t.add({"a", 1, 10, std::nullopt});
  t.add({"a", 2, 20, std::nullopt});
  t.add({"a", 3, 60, std::nullopt});
  t.add({"b", 1, 80, std::nullopt});
  const auto r = balance_budget({"a", "b"}, t, 30, 50);
  ASSERT_EQ(r.plans.size(), 1u);
  EXPECT_EQ(r.plans[0].beam, 2);
  EXPECT_TRUE(r.plans[0].below_window);
  EXPECT_EQ(r.infeasible, std::vector<std::string>{"b"});
}

TEST(Balance, EmptyModels) {
  try {
    balance_budget({}, paper_costs(), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}
