#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scalebench/cli/svg.hpp"
#include "scalebench/scalebench.hpp"

namespace scalebench::cli {

inline constexpr const char* kFixtureEnv = "SCALEBENCH_FIXTURES";

inline std::string default_fixture_dir() {
  if (const char* env = std::getenv(kFixtureEnv); env && *env) return env;
#ifdef SCALEBENCH_DEFAULT_FIXTURES
  return SCALEBENCH_DEFAULT_FIXTURES;
#else
  return "fixtures";
#endif
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string g6(double v) { return fmt("%.6g", v); }
inline std::string f6(double v) { return fmt("%.6f", v); }
inline std::string f2(double v) { return fmt("%.2f", v); }

inline std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back('\t');
    out += cells[i];
  }
  out.push_back('\n');
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::IoError, "short write to '" + path + "'");
}

// Display conventions: error rates in percent, model sizes in billions.
inline bool is_rate_metric(const std::string& m) {
  const auto l = ingest::lower_ascii(m);
  return l == "wer" || l == "cer" || l == "ncer";
}
inline double metric_scale(const std::string& m) { return is_rate_metric(m) ? 100.0 : 1.0; }
inline double axis_display_unit(scaling::ScaleAxis a) {
  return a == scaling::ScaleAxis::ModelParams ? 1e9 : 1.0;
}

inline std::string axis_label(scaling::ScaleAxis a) {
  switch (a) {
    case scaling::ScaleAxis::ModelParams: return "model parameters";
    case scaling::ScaleAxis::DataHours: return "training hours";
    case scaling::ScaleAxis::ComputeFlops: return "training FLOPS";
  }
  return "";
}

struct Fixtures {
  std::string dir;
  std::string path(const std::string& name) const {
    const auto p = (std::filesystem::path(dir) / name).string();
    if (!std::filesystem::exists(p)) fail(ErrorKind::IoError, "missing fixture '" + p + "'");
    return p;
  }
};

inline scaling::ScalingSeries load_series_file(const std::string& path, scaling::ScaleAxis axis,
                                               const std::string& metric, const std::string& label) {
  const auto fx = ingest::load_fixture(path);
  const auto cx = fx.column("x"), cy = fx.column("y");
  std::vector<scaling::Point> pts;
  for (std::size_t r = 0; r < fx.rows.size(); ++r) {
    const std::string where = path + " line " + std::to_string(fx.row_lines[r]);
    double x = 0.0;
    try {
      x = ingest::parse_size(fx.rows[r][cx]);
    } catch (const Error&) {
      fail(ErrorKind::SchemaError, where + ": bad x value '" + fx.rows[r][cx] + "'");
    }
    pts.push_back({x, ingest::parse_number(fx.rows[r][cy], where)});
  }
  return scaling::ScalingSeries(axis, metric, label.empty() ? path : label, std::move(pts));
}

}  // namespace detail

// Runs the command line; returns the process exit code. Results go to `out`
// (or --out), diagnostics to `err` as one "scalebench: error[Kind]: ..." line.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Scaling-law workbench and speech-evaluation metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ingest::kToolVersion));

  std::string out_path;
  std::string text;  // accumulated result

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "Fit power laws to WER tables or (x, y) series");
  std::string fit_table, fit_series, fit_lang, fit_svg, fit_save, fit_axis = "model_params", fit_metric = "WER",
                                                                     fit_label;
  bool fit_loss = false, fit_stamp = false;
  double fit_ci = 0.0;
  int fit_resamples = 1000;
  std::uint64_t fit_seed = 0;
  fit->add_option("--table", fit_table, "WER table (TSV, percent)");
  fit->add_option("--series", fit_series, "TSV with columns x, y");
  fit->add_option("--lang", fit_lang, "Comma-separated languages (name or ISO3); 'all' for every regular row");
  fit->add_option("--axis", fit_axis, "Scale axis for --series: model_params|data_hours|compute_flops");
  fit->add_option("--metric", fit_metric, "Metric name for --series");
  fit->add_option("--label", fit_label, "Series label for --series");
  fit->add_flag("--loss", fit_loss, "Also fit y = L_inf + beta x^alpha");
  fit->add_option("--ci", fit_ci, "Bootstrap confidence level for alpha, e.g. 0.95");
  fit->add_option("--resamples", fit_resamples, "Bootstrap resamples");
  fit->add_option("--seed", fit_seed, "Bootstrap seed");
  fit->add_option("--svg", fit_svg, "Write a log-log plot");
  fit->add_option("--save", fit_save, "Write a JSON fit report (single series)");
  fit->add_flag("--stamp", fit_stamp, "Record a timestamp in the saved report");
  fit->add_option("--out", out_path, "Output path");

  // ---- predict ----
  auto* pred = app.add_subcommand("predict", "Evaluate a fitted law at new scale values");
  std::string pred_table, pred_lang;
  std::vector<std::string> pred_at;
  std::optional<double> pred_alpha, pred_beta, pred_linf;
  pred->add_option("--table", pred_table, "WER table to fit first");
  pred->add_option("--lang", pred_lang, "Language for --table");
  pred->add_option("--alpha", pred_alpha, "Exponent");
  pred->add_option("--beta", pred_beta, "Coefficient (metric units at x = 1)");
  pred->add_option("--linf", pred_linf, "Irreducible term");
  pred->add_option("--at", pred_at, "Scale values, e.g. 9B")->required();
  pred->add_option("--out", out_path, "Output path");

  // ---- params ----
  auto* params = app.add_subcommand("params", "Closed-form parameter counts");
  std::string params_arch, params_config;
  params->add_option("--arch", params_arch, "Architecture table (TSV); default built-in configs");
  params->add_option("--config", params_config, "Comma-separated config labels");
  params->add_option("--out", out_path, "Output path");

  // ---- flops ----
  auto* flops = app.add_subcommand("flops", "Analytic decode or training FLOPS");
  std::string flops_config;
  compute::DecodeSettings flops_s;
  bool no_cache = false, no_attention = false;
  std::optional<double> train_tokens;
  flops->add_option("--config", flops_config, "Comma-separated config labels (default all)");
  flops->add_option("--beam", flops_s.beam, "Beam size");
  flops->add_option("--out-len", flops_s.out_len, "Output tokens");
  flops->add_option("--audio", flops_s.audio_seconds, "Audio seconds");
  flops->add_flag("--no-kv-cache", no_cache, "Recompute the decoder prefix every step");
  flops->add_flag("--no-attention", no_attention, "Drop the attention score terms");
  flops->add_option("--train-tokens", train_tokens, "Report 6 N D training FLOPS for this many tokens");
  flops->add_option("--out", out_path, "Output path");

  // ---- balance ----
  auto* bal = app.add_subcommand("balance", "Pick per-model beams under a shared TFLOPS budget");
  std::string bal_costs, bal_models;
  double bal_lo = 0.0, bal_hi = 0.0;
  bool bal_estimate = false;
  int bal_max_beam = 16;
  bal->add_option("--costs", bal_costs, "Measured cost table (TSV)");
  bal->add_option("--lo", bal_lo, "Budget window lower edge (TFLOPS)")->required();
  bal->add_option("--hi", bal_hi, "Budget window upper edge (TFLOPS)")->required();
  bal->add_option("--models", bal_models, "Comma-separated models (default: all in the cost source)");
  bal->add_flag("--estimate", bal_estimate, "Use the analytic estimator, calibrated on --costs when given");
  bal->add_option("--max-beam", bal_max_beam, "Largest beam the estimator considers");
  bal->add_option("--out", out_path, "Output path");

  // ---- score ----
  auto* score = app.add_subcommand("score", "WER / CER / N-CER / B-WER / BLEU");
  std::string score_metric, score_ref, score_hyp, score_manifest, score_chain, score_table, score_table_file,
      score_unit = "codepoint", score_bias;
  bool keep_ws = false;
  int max_n = 4;
  std::optional<double> smooth;
  score->add_option("metric", score_metric, "wer|cer|ncer|bwer|bleu")
      ->required()
      ->check(CLI::IsMember({"wer", "cer", "ncer", "bwer", "bleu"}));
  score->add_option("--ref", score_ref, "Reference text, one segment per line");
  score->add_option("--hyp", score_hyp, "Hypothesis text, line-aligned with --ref");
  score->add_option("--manifest", score_manifest, "JSONL manifest with ref/hyp fields");
  score->add_option("--chain", score_chain, "Normalization steps, comma-separated");
  score->add_option("--table", score_table, "Mapping table name for ncer");
  score->add_option("--table-file", score_table_file, "Mapping table file for ncer");
  score->add_option("--unit", score_unit, "CER unit")->check(CLI::IsMember({"codepoint", "grapheme"}));
  score->add_flag("--keep-whitespace", keep_ws, "Do not strip whitespace before CER");
  score->add_option("--bias", score_bias, "Bias word list, one per line (bwer)");
  score->add_option("--max-n", max_n, "BLEU n-gram order");
  score->add_option("--smooth", smooth, "BLEU zero-precision floor");
  score->add_option("--out", out_path, "Output path");

  // ---- normalize ----
  auto* norm = app.add_subcommand("normalize", "Apply a normalization chain");
  std::string norm_chain, norm_text, norm_in;
  std::vector<std::string> norm_tables;
  norm->add_option("--chain", norm_chain, "Steps, comma-separated")->required();
  norm->add_option("--text", norm_text, "Input text");
  norm->add_option("--in", norm_in, "Input file, one line per item");
  norm->add_option("--map-file", norm_tables, "Register NAME=PATH mapping tables");
  norm->add_option("--out", out_path, "Output path");

  // ---- icl ----
  auto* icl = app.add_subcommand("icl", "Retrieve in-context examples and build the prompt");
  std::string icl_store, icl_query, icl_frames, icl_target, icl_wav;
  std::size_t icl_k = 2;
  double icl_gap = icl::kDefaultGapSeconds;
  icl->add_option("--store", icl_store, "Embedding store file")->required();
  icl->add_option("--query", icl_query, "Comma-separated query vector");
  icl->add_option("--query-frames", icl_frames, "Whitespace matrix T x D, averaged over time");
  icl->add_option("-k", icl_k, "Number of examples");
  icl->add_option("--target", icl_target, "Target utterance WAV")->required();
  icl->add_option("--gap", icl_gap, "Pause between segments (s)");
  icl->add_option("--out-wav", icl_wav, "Write concatenated audio");
  icl->add_option("--out", out_path, "Output path");

  // ---- report ----
  auto* rep = app.add_subcommand("report", "Per-language fits, data regression and the r^2 ordering");
  std::string rep_fixtures, rep_lang, rep_bleu, rep_svg;
  bool rep_stamp = false;
  rep->add_option("--fixtures", rep_fixtures, "Fixture directory (default $SCALEBENCH_FIXTURES)");
  rep->add_option("--lang", rep_lang, "Comma-separated language subset (default: top 20)");
  rep->add_option("--bleu", rep_bleu, "TSV with columns label, bleu to classify");
  rep->add_option("--svg", rep_svg, "Write per-language fits as a log-log plot");
  rep->add_flag("--stamp", rep_stamp, "Add a generation timestamp");
  rep->add_option("--out", out_path, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << ingest::kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "scalebench: error[UsageError]: " << msg << "\n";
    return 2;
  }

  auto usage = [](const std::string& msg) { fail(ErrorKind::UsageError, msg); };
  auto timestamp = [] {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string(buf);
  };

  try {
    if (*fit) {
      std::vector<scaling::ScalingSeries> series;
      if (!fit_table.empty() == !fit_series.empty()) usage("fit needs exactly one of --table or --series");
      if (!fit_table.empty()) {
        const auto table = ingest::load_wer_table(fit_table);
        if (fit_lang.empty()) usage("fit --table needs --lang");
        if (fit_lang == "all") {
          for (std::size_t i = 0; i < table.languages.size(); ++i) {
            if (!table.irregular[i]) series.push_back(ingest::to_series(table, table.languages[i].name));
          }
        } else {
          for (const auto& l : split_list(fit_lang)) series.push_back(ingest::to_series(table, l));
        }
      } else {
        series.push_back(load_series_file(fit_series, scaling::axis_from_string(fit_axis), fit_metric, fit_label));
      }
      if (!fit_save.empty() && series.size() != 1) usage("--save needs exactly one series");

      std::vector<std::string> header{"label", "n", "alpha", "beta", "beta_display", "r2", "r2_linear"};
      if (fit_loss) header.insert(header.end(), {"loss_l_inf", "loss_alpha", "loss_beta", "loss_r2"});
      if (fit_ci > 0.0) header.insert(header.end(), {"alpha_ci_lo", "alpha_ci_hi"});
      text += join(header);
      std::vector<PlotSeries> plots;
      for (const auto& s : series) {
        const auto f = scaling::fit_power_law(s);
        const double display =
            scaling::predict(f, axis_display_unit(s.axis())) * metric_scale(s.metric_name());
        std::vector<std::string> row{s.label(), std::to_string(f.n_points), f6(f.alpha), g6(f.beta), g6(display),
                                     f6(f.r_squared), f6(f.r_squared_linear)};
        std::optional<scaling::LossCurveFit> lf;
        std::optional<scaling::ConfidenceInterval> ci;
        if (fit_loss) {
          lf = scaling::fit_loss_curve(s);
          row.insert(row.end(), {g6(lf->l_inf), f6(lf->alpha), g6(lf->beta), f6(lf->r_squared)});
        }
        if (fit_ci > 0.0) {
          ci = scaling::bootstrap_ci(s, scaling::BootstrapTarget::alpha(), fit_ci, fit_resamples, fit_seed);
          row.insert(row.end(), {f6(ci->lo), f6(ci->hi)});
        }
        text += join(row);
        plots.push_back({s.label(), s.points(), f});
        if (!fit_save.empty()) {
          ingest::FitReportFile rf;
          rf.created_at = fit_stamp ? timestamp() : "";
          rf.axis = std::string(scaling::to_string(s.axis()));
          rf.metric = s.metric_name();
          rf.label = s.label();
          rf.points = s.points();
          rf.fit = f;
          rf.loss_fit = lf;
          rf.alpha_ci = ci;
          rf.provenance = {fit_table.empty() ? "series:" + fit_series : "table:" + fit_table, "fit:log-log-ols"};
          ingest::save_report(rf, fit_save);
        }
      }
      if (!fit_svg.empty()) {
        write_text(fit_svg, render_loglog_svg(plots, "power-law fit", axis_label(series.front().axis()),
                                              series.front().metric_name()));
      }
    } else if (*pred) {
      scaling::AnyFit model;
      std::string metric = "WER";
      if (!pred_table.empty()) {
        if (pred_lang.empty()) usage("predict --table needs --lang");
        const auto s = ingest::to_series(ingest::load_wer_table(pred_table), pred_lang);
        model = scaling::fit_power_law(s);
      } else {
        if (!pred_alpha || !pred_beta) usage("predict needs --table/--lang or --alpha and --beta");
        metric = "value";
        if (pred_linf) {
          model = scaling::LossCurveFit{*pred_linf, *pred_alpha, *pred_beta, 0.0, 0};
        } else {
          scaling::PowerLawFit f;
          f.alpha = *pred_alpha;
          f.beta = *pred_beta;
          model = f;
        }
      }
      text += join({"x", "prediction"});
      for (const auto& a : pred_at) {
        const double x = ingest::parse_size(a);
        text += join({g6(x), g6(scaling::predict(model, x) * metric_scale(metric))});
      }
    } else if (*params) {
      auto configs = params_arch.empty() ? compute::builtin_configs() : ingest::load_arch_configs(params_arch);
      if (!params_config.empty()) {
        std::vector<compute::ArchConfig> keep;
        for (const auto& l : split_list(params_config)) {
          auto it = std::find_if(configs.begin(), configs.end(), [&](const auto& c) { return c.label == l; });
          if (it == configs.end()) usage("unknown config '" + l + "'");
          keep.push_back(*it);
        }
        configs = keep;
      }
      text += join({"label", "enc_layers", "dec_layers", "hidden", "ffn", "heads", "encoder", "decoder", "embedding",
                    "output_projection", "ctc_head", "total", "nominal", "total_over_nominal"});
      for (const auto& c : configs) {
        const auto p = compute::count_params(c);
        text += join({c.label, std::to_string(c.enc_layers), std::to_string(c.dec_layers), std::to_string(c.hidden),
                      std::to_string(c.ffn), std::to_string(c.heads), std::to_string(p.encoder),
                      std::to_string(p.decoder), std::to_string(p.embedding), std::to_string(p.output_projection),
                      std::to_string(p.ctc_head), std::to_string(p.total), g6(c.nominal_params),
                      c.nominal_params > 0 ? fmt("%.4f", static_cast<double>(p.total) / c.nominal_params) : "NA"});
      }
    } else if (*flops) {
      flops_s.kv_cache = !no_cache;
      flops_s.include_attention = !no_attention;
      auto configs = compute::builtin_configs();
      std::vector<compute::ArchConfig> selected;
      if (flops_config.empty()) {
        selected = configs;
      } else {
        for (const auto& l : split_list(flops_config)) {
          auto it = std::find_if(configs.begin(), configs.end(), [&](const auto& c) { return c.label == l; });
          if (it == configs.end()) usage("unknown config '" + l + "'");
          selected.push_back(*it);
        }
      }
      if (train_tokens) {
        text += join({"label", "total_params", "tokens", "train_flops"});
        for (const auto& c : selected) {
          text += join({c.label, std::to_string(compute::count_params(c).total), g6(*train_tokens),
                        fmt("%.6e", compute::estimate_train_flops(c, *train_tokens))});
        }
      } else {
        text += join({"label", "beam", "out_len", "audio_s", "encoder_flops", "decoder_flops", "attention_flops",
                      "total_flops", "total_tflops"});
        for (const auto& c : selected) {
          const auto f = compute::estimate_decode_flops(c, flops_s);
          text += join({c.label, std::to_string(flops_s.beam), std::to_string(flops_s.out_len),
                        g6(flops_s.audio_seconds), fmt("%.6e", f.encoder_flops), fmt("%.6e", f.decoder_flops),
                        fmt("%.6e", f.attention_flops), fmt("%.6e", f.total), f6(f.total / 1e12)});
        }
      }
    } else if (*bal) {
      compute::CostSource source;
      std::vector<std::string> models;
      if (bal_estimate) {
        std::map<std::string, double> scale;
        const auto configs = compute::builtin_configs();
        // Captures by value: the estimator outlives this block.
        auto analytic = [configs](const std::string& label, int beam) {
          auto it = std::find_if(configs.begin(), configs.end(), [&](const auto& c) { return c.label == label; });
          if (it == configs.end()) fail(ErrorKind::UsageError, "unknown config '" + label + "'");
          compute::DecodeSettings s;
          s.beam = beam;
          return compute::estimate_decode_flops(*it, s).total / 1e12;
        };
        if (!bal_costs.empty()) {
          const auto table = ingest::load_cost_table(bal_costs);
          std::map<std::pair<std::string, int>, double> est;
          for (const auto& r : table.rows()) est[{r.model_label, r.beam}] = analytic(r.model_label, r.beam);
          scale = compute::calibrate(table, est);
          for (const auto& [m, _] : scale) models.push_back(m);
        } else {
          for (const auto& c : configs) models.push_back(c.label);
        }
        source = compute::CostEstimator{[=](const std::string& label, int beam) {
                                          auto it = scale.find(label);
                                          return analytic(label, beam) * (it == scale.end() ? 1.0 : it->second);
                                        },
                                        bal_max_beam};
      } else {
        if (bal_costs.empty()) usage("balance needs --costs or --estimate");
        auto table = ingest::load_cost_table(bal_costs);
        models = table.models();
        source = std::move(table);
      }
      if (!bal_models.empty()) models = split_list(bal_models);
      const auto result = compute::balance_budget(models, source, bal_lo, bal_hi);
      text += join({"model", "beam", "tflops", "status"});
      for (const auto& p : result.plans) {
        text += join({p.model_label, std::to_string(p.beam), g6(p.cost_tflops), p.below_window ? "below-window" : "ok"});
      }
      for (const auto& m : result.infeasible) text += join({m, "-", "-", "infeasible"});
    } else if (*score) {
      std::vector<std::pair<std::string, std::string>> pairs;
      if (!score_manifest.empty()) {
        const auto m = ingest::load_manifest(score_manifest);
        if (!m.errors.empty()) {
          const auto& e = m.errors.front();
          fail(ErrorKind::SchemaError, score_manifest + " line " + std::to_string(e.line) +
                                           (e.field.empty() ? "" : " field '" + e.field + "'") + ": " + e.message);
        }
        for (const auto& r : m.rows) pairs.emplace_back(r.ref, r.hyp);
      } else {
        if (score_ref.empty() || score_hyp.empty()) usage("score needs --ref and --hyp, or --manifest");
        auto refs = read_lines(score_ref);
        auto hyps = read_lines(score_hyp);
        if (refs.size() != hyps.size()) {
          fail(ErrorKind::SchemaError, "--ref has " + std::to_string(refs.size()) + " lines but --hyp has " +
                                           std::to_string(hyps.size()));
        }
        for (std::size_t i = 0; i < refs.size(); ++i) pairs.emplace_back(refs[i], hyps[i]);
      }
      if (pairs.empty()) fail(ErrorKind::EmptyReference, "no segments to score");
      auto tables = metrics::TableRegistry::with_builtins();
      if (!score_table_file.empty()) {
        tables.add(metrics::load_mapping_table(score_table_file, score_table.empty() ? "file" : score_table));
        if (score_table.empty()) score_table = "file";
      }
      const auto chain = metrics::NormalizationChain::parse(score_chain);
      metrics::CharOptions copts;
      copts.unit = score_unit == "grapheme" ? metrics::CharUnit::Grapheme : metrics::CharUnit::CodePoint;
      copts.remove_whitespace = !keep_ws;
      auto counts_row = [&](const metrics::ScoreReport& r) {
        text += join({"metric", "value", "substitutions", "deletions", "insertions", "hits", "ref_len"});
        text += join({std::string(metrics::to_string(r.metric)), f2(r.value * 100.0), std::to_string(r.substitutions),
                      std::to_string(r.deletions), std::to_string(r.insertions), std::to_string(r.hits),
                      std::to_string(r.ref_len)});
      };
      if (score_metric == "wer") {
        counts_row(metrics::corpus_wer(pairs, chain, tables));
      } else if (score_metric == "cer") {
        counts_row(metrics::corpus_cer(pairs, chain, copts, tables));
      } else if (score_metric == "ncer") {
        if (score_table.empty()) usage("ncer needs --table or --table-file");
        counts_row(metrics::corpus_normalized_cer(pairs, tables.get(score_table), chain, copts, tables));
      } else if (score_metric == "bwer") {
        if (score_bias.empty()) usage("bwer needs --bias");
        std::set<std::string> bias;
        for (const auto& w : read_lines(score_bias)) {
          if (!w.empty()) bias.insert(w);
        }
        const auto r = metrics::biased_wer(pairs, bias, chain, tables);
        auto opt = [](const std::optional<double>& v) { return v ? f2(*v * 100.0) : std::string("NA"); };
        text += join({"wer", "u_wer", "b_wer", "biased_ref_count", "unbiased_ref_count", "biased_errors",
                      "unbiased_errors"});
        text += join({f2(r.wer * 100.0), opt(r.u_wer), opt(r.b_wer), std::to_string(r.biased_ref_count),
                      std::to_string(r.unbiased_ref_count), std::to_string(r.biased_errors),
                      std::to_string(r.unbiased_errors)});
      } else {
        std::vector<std::string> refs, hyps;
        for (auto& [r, h] : pairs) {
          refs.push_back(metrics::normalize(r, chain, tables));
          hyps.push_back(metrics::normalize(h, chain, tables));
        }
        metrics::BleuOptions bo;
        bo.max_n = max_n;
        bo.smoothing_floor = smooth;
        const auto d = metrics::bleu_detail(refs, hyps, bo);
        text += join({"metric", "value", "brevity_penalty", "ref_len", "hyp_len", "capability"});
        text += join({"BLEU", f2(d.score), f6(d.brevity_penalty), std::to_string(d.ref_len),
                      std::to_string(d.hyp_len), std::string(scaling::to_string(scaling::classify_capability(d.score)))});
      }
    } else if (*norm) {
      auto tables = metrics::TableRegistry::with_builtins();
      for (const auto& spec : norm_tables) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) usage("--map-file expects NAME=PATH");
        tables.add(metrics::load_mapping_table(spec.substr(eq + 1), spec.substr(0, eq)));
      }
      const auto chain = metrics::NormalizationChain::parse(norm_chain);
      if (norm_text.empty() == norm_in.empty()) usage("normalize needs exactly one of --text or --in");
      const auto lines = norm_in.empty() ? std::vector<std::string>{norm_text} : read_lines(norm_in);
      for (const auto& l : lines) text += metrics::normalize(l, chain, tables) + "\n";
    } else if (*icl) {
      const auto store = icl::load_store(icl_store);
      std::vector<double> query;
      if (!icl_query.empty() == !icl_frames.empty()) usage("icl needs exactly one of --query or --query-frames");
      if (!icl_query.empty()) {
        for (const auto& v : split_list(icl_query)) query.push_back(ingest::parse_number(v, "--query"));
      } else {
        std::vector<std::vector<double>> frames;
        for (const auto& line : read_lines(icl_frames)) {
          std::istringstream ls(line);
          std::vector<double> row;
          double v;
          while (ls >> v) row.push_back(v);
          if (!row.empty()) frames.push_back(std::move(row));
        }
        query = icl::time_average(frames);
      }
      const auto base = std::filesystem::path(icl_store).parent_path();
      auto resolve = [&](const std::string& ref) {
        const std::filesystem::path p(ref);
        return (p.is_absolute() ? p : base / p).string();
      };
      const auto target_wav = icl::read_wav(icl_target);
      const auto examples = icl::retrieve_examples(store, query, icl_k);
      const auto plan = icl::build_prompt(
          examples, {icl_target, static_cast<int>(target_wav.sample_rate), target_wav.duration_s()}, icl_gap);
      text += "decoder_prefix\t" + plan.decoder_prefix + "\n";
      text += join({"segment", "source", "start_s", "duration_s", "audio"});
      for (std::size_t i = 0; i < plan.segments.size(); ++i) {
        const auto& s = plan.segments[i];
        text += join({std::to_string(i), s.source_id.value_or("target"), f6(s.start_offset_s), f6(s.duration_s),
                      s.audio_ref});
      }
      text += "total_duration_s\t" + f6(plan.total_duration_s) + "\n";
      if (!icl_wav.empty()) {
        const auto audio = icl::concat_audio(plan, [&](const std::string& ref) {
          return ref == icl_target ? target_wav : icl::read_wav(resolve(ref));
        });
        icl::write_wav(icl_wav, audio);
        text += "samples\t" + std::to_string(audio.samples.size()) + "\n";
      }
    } else if (*rep) {
      const Fixtures fx{rep_fixtures.empty() ? default_fixture_dir() : rep_fixtures};
      const auto table = ingest::load_wer_table(fx.path("fleurs_wer.tsv"), true);
      const auto catalog = ingest::load_catalog(fx.path("train_hours.tsv"), true);
      std::vector<std::size_t> langs;
      if (rep_lang.empty()) {
        for (std::size_t i = 0; i < table.languages.size() && langs.size() < 20; ++i) {
          if (table.groups[i] == "top") langs.push_back(i);
        }
      } else {
        for (const auto& l : split_list(rep_lang)) langs.push_back(table.index_of(l));
      }
      if (rep_stamp) text += "# generated\t" + timestamp() + "\n";
      text += "# tool_version\t" + std::string(ingest::kToolVersion) + "\n";
      text += "# section\tper_language_model_size_fits\n";
      text += join({"language", "iso3", "n", "alpha", "beta_1b_pct", "r2", "r2_linear"});
      std::map<std::string, double> hours, wer9, r2;
      std::vector<PlotSeries> plots;
      const auto col9 = table.size_index(9e9);
      for (std::size_t i : langs) {
        const auto& key = table.languages[i];
        const auto s = ingest::to_series(table, key.name);
        const auto f = scaling::fit_power_law(s);
        text += join({key.name, key.iso3, std::to_string(f.n_points), f6(f.alpha),
                      f6(scaling::predict(f, 1e9) * 100.0), f6(f.r_squared), f6(f.r_squared_linear)});
        plots.push_back({key.name, s.points(), f});
        r2[key.name] = f.r_squared;
        wer9[key.name] = table.rows[i][col9];
        if (catalog.contains(key.name)) hours[key.name] = catalog.get(key.name).hours_base;
      }
      text += "# section\tcross_language_data_regression\n";
      text += "# x\thours_base\n# y\tWER at 9B\n";
      try {
        const auto report = scaling::data_sensitivity_report(hours, wer9, r2);
        text += join({"n", "alpha", "beta", "r2"});
        text += join({std::to_string(report.cross_fit.n_points), f6(report.cross_fit.alpha),
                      g6(report.cross_fit.beta), f6(report.cross_fit.r_squared)});
        text += "# section\tordering\n";
        text += join({"median_per_language_r2", f6(report.median_per_language_r2)});
        text += join({"cross_language_r2", f6(report.cross_fit.r_squared)});
        text += join({"ordering_statistic", f6(report.ordering_statistic)});
        text += join({"claim_median_exceeds_cross", report.ordering_statistic > 0.0 ? "holds" : "fails"});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientData) throw;
        text += join({"status", "InsufficientData"});
        text += "# section\tordering\n";
        text += join({"status", "InsufficientData"});
      }
      if (!rep_bleu.empty()) {
        const auto bx = ingest::load_fixture(rep_bleu);
        const auto c_label = bx.column("label"), c_bleu = bx.column("bleu");
        text += "# section\tcapability\n";
        text += join({"label", "bleu", "capability"});
        for (std::size_t r = 0; r < bx.rows.size(); ++r) {
          const double b = ingest::parse_number(bx.rows[r][c_bleu], rep_bleu + " line " + std::to_string(bx.row_lines[r]));
          text += join({bx.rows[r][c_label], f2(b), std::string(scaling::to_string(scaling::classify_capability(b)))});
        }
      }
      if (!rep_svg.empty()) {
        write_text(rep_svg, render_loglog_svg(plots, "model-size scaling", "model parameters", "WER (fraction)"));
      }
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "scalebench: error[" << to_string(e.kind()) << "]: " << msg << "\n";
    return e.kind() == ErrorKind::UsageError ? 2 : 1;
  }

  try {
    if (out_path.empty()) {
      out << text;
    } else {
      write_text(out_path, text);
    }
  } catch (const Error& e) {
    err << "scalebench: error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace scalebench::cli
