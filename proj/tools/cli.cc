// Copyright 2026 The newsocr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "newsocr/bench.h"
#include "newsocr/detect.h"
#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/imageops.h"
#include "newsocr/log.h"
#include "newsocr/manifest.h"
#include "newsocr/pipeline.h"
#include "newsocr/pipeline_config.h"
#include "newsocr/recognize.h"
#include "newsocr/report.h"
#include "newsocr/superres.h"
#include "newsocr/text_metrics.h"
#include "newsocr/version.h"

namespace newsocr::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using pipeline::PipelineConfig;

struct Globals {
  std::string log_format = "text";
  std::string log_level = "info";
  bool to_stdout = false;
  std::ostream* out = nullptr;
};

std::string TypeName(pipeline::ValueKind kind) {
  switch (kind) {
    case pipeline::ValueKind::kPath:
      return "PATH";
    case pipeline::ValueKind::kInt:
      return "INT";
    case pipeline::ValueKind::kReal:
      return "REAL";
    case pipeline::ValueKind::kBool:
      return "BOOL";
    case pipeline::ValueKind::kString:
      break;
  }
  return "TEXT";
}

// Flag twins of every pipeline config key plus --config.
class ConfigFlags {
 public:
  void Attach(CLI::App* app) {
    app->add_option("--config", config_path_, "pipeline config file (YAML)")
        ->check(CLI::ExistingFile);
    const auto& keys = pipeline::PipelineConfigKeys();
    values_.resize(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      options_.push_back(app->add_option("--" + keys[i].name, values_[i], keys[i].help)
                             ->type_name(TypeName(keys[i].kind))
                             ->group("Config keys"));
    }
  }

  // Defaults, then the config file, then flags.
  PipelineConfig Build() const {
    PipelineConfig cfg;
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (!config_path_.empty()) {
      const fs::path path = config_path_;
      std::ifstream in(path, std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      pipeline::ApplyConfigYaml(cfg, text.str(), path.string(), path.parent_path());
    }
    const auto& keys = pipeline::PipelineConfigKeys();
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (options_[i]->count() > 0) {
        pipeline::SetConfigValue(cfg, keys[i].name, values_[i], fs::current_path());
      }
    }
    log::Info("effective_config", {{"digest", pipeline::ConfigDigest(cfg)}});
    log::Event(log::Level::kDebug, "effective_config_values",
               {{"config", pipeline::EffectiveConfigJson(cfg)}});
    return cfg;
  }

 private:
  std::string config_path_;
  std::vector<std::string> values_;
  std::vector<CLI::Option*> options_;
};

// Options shared by every subcommand that writes a report.
struct ReportOutput {
  std::string out_dir = ".";
  std::string format = "markdown";

  void Attach(CLI::App* app) {
    app->add_option("--out", out_dir, "directory receiving report.md and report.jsonl")
        ->capture_default_str();
    app->add_option("--format", format, "report format written with --stdout")
        ->check(CLI::IsMember({"markdown", "machine"}))
        ->capture_default_str();
  }

  void Emit(const Globals& g, const std::string& machine, const std::string& markdown) const {
    if (g.to_stdout) {
      *g.out << (bench::ParseReportFormat(format) == bench::ReportFormat::kMachine ? machine
                                                                                 : markdown);
      return;
    }
    const fs::path dir = out_dir;
    fs::create_directories(dir);
    WriteFileText(dir / "report.jsonl", machine);
    WriteFileText(dir / "report.md", markdown);
    log::Info("report_written", {{"dir", dir.string()}});
  }
};

// Runs fn(i) for i in [0, n) on `workers` threads.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const int threads = static_cast<int>(std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(n, 1)));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(loop);
  loop();
}

void RequireSafeIds(const Manifest& m) {
  std::vector<std::string> bad;
  for (const auto& s : m.samples) {
    if (!IsFileSafeId(s.id)) bad.push_back(s.id);
  }
  if (!bad.empty()) {
    std::string ids;
    for (const auto& b : bad) ids += (ids.empty() ? "'" : ", '") + b + "'";
    throw ValidationError("sample ids are not usable as file names: " + ids);
  }
}

// Lines of the samples that succeeded, in manifest order.
std::string Lines(const std::vector<std::optional<std::string>>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (l) out += *l + "\n";
  }
  return out;
}

// Machine output: a file, or stdout when --stdout is set.
void EmitLines(const Globals& g, const fs::path& path, const std::string& text) {
  if (g.to_stdout) {
    *g.out << text;
    return;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFileText(path, text);
  log::Info("written", {{"path", path.string()}});
}

int SampleExit(int failures) { return failures > 0 ? kExitSampleFailures : kExitOk; }

// --- degrade ---------------------------------------------------------------

struct DegradeArgs {
  std::string manifest;
  std::string out;
  imageops::DegradeSpec spec;
};

int Degrade(const Globals& g, const DegradeArgs& a, int workers) {
  a.spec.Validate();
  const Manifest m = LoadManifest(a.manifest);
  RequireSafeIds(m);
  const fs::path out = a.out;
  fs::create_directories(out / "low");
  fs::create_directories(out / "high");
  std::vector<std::optional<std::string>> lines(m.samples.size());
  std::atomic<int> failures{0};
  ParallelFor(m.samples.size(), workers, [&](std::size_t i) {
    const Sample& s = m.samples[i];
    try {
      const RasterImage page = ReadImage(m.Resolve(s.image));
      const imageops::DegradeResult low = imageops::Degrade(page, a.spec);
      // The reference keeps only the whole blocks the low image was built from.
      const int f = a.spec.scale_factor;
      const RasterImage high = imageops::Crop(
          page, imageops::PixelRect{0, 0, low.image.width() * f, low.image.height() * f});
      Sample pair;
      pair.id = s.id;
      pair.image = "low/" + s.id + ".jpg";
      pair.pair = "high/" + s.id + ".png";
      pair.text = s.text;
      if (s.labels) pair.labels = fs::absolute(m.Resolve(*s.labels)).string();
      WriteFileBytes(out / pair.image, low.jpeg);
      WritePng(high, out / *pair.pair);
      lines[i] = FormatSampleLine(pair);
    } catch (const Error& e) {
      ++failures;
      log::Warn("sample_failed", {{"sample_id", s.id}, {"error", e.what()}});
    }
  });
  EmitLines(g, out / "manifest.jsonl", Lines(lines));
  return SampleExit(failures);
}

// --- segment ---------------------------------------------------------------

struct SegmentArgs {
  std::string manifest;
  std::string task = "article";
  std::string out = "detections.jsonl";
  std::string crops;
};

int Segment(const Globals& g, const SegmentArgs& a, const PipelineConfig& cfg) {
  const detect::Task task = detect::ParseTask(a.task);
  const auto& stage =
      task == detect::Task::kArticle ? cfg.article_detector : cfg.column_detector;
  stage.config.Validate();
  const auto backend = detect::MakeDetectorBackend(stage.backend, stage.config, stage.fixture);
  const Manifest m = LoadManifest(a.manifest);
  if (!a.crops.empty()) {
    RequireSafeIds(m);
    fs::create_directories(a.crops);
  }
  std::vector<std::optional<detect::DetectionRecord>> records(m.samples.size());
  std::atomic<int> failures{0};
  ParallelFor(m.samples.size(), cfg.workers, [&](std::size_t i) {
    const Sample& s = m.samples[i];
    try {
      const RasterImage page = ReadImage(m.Resolve(s.image));
      detect::DetectionRecord rec;
      rec.image_digest = ImageDigest(page);
      rec.task = task;
      rec.sample_id = s.id;
      rec.detections =
          detect::ReadingOrder(detect::DetectRegions(page, *backend, stage.config), task);
      if (!a.crops.empty()) {
        for (std::size_t n = 0; n < rec.detections.size(); ++n) {
          WritePng(imageops::Crop(page, rec.detections[n].box, cfg.crop_padding),
                   fs::path(a.crops) / (s.id + "_" + std::to_string(n) + ".png"));
        }
      }
      log::Info("sample_done", {{"sample_id", s.id}, {"regions", rec.detections.size()}});
      records[i] = std::move(rec);
    } catch (const Error& e) {
      ++failures;
      log::Warn("sample_failed", {{"sample_id", s.id}, {"error", e.what()}});
    }
  });
  std::vector<detect::DetectionRecord> done;
  for (auto& r : records) {
    if (r) done.push_back(std::move(*r));
  }
  std::ostringstream text;
  detect::WriteDetectionRecords(done, text);
  EmitLines(g, a.out, text.str());
  return SampleExit(failures);
}

// --- enhance ---------------------------------------------------------------

struct EnhanceArgs {
  std::string manifest;
  std::string out;
};

int Enhance(const Globals& g, const EnhanceArgs& a, const PipelineConfig& cfg) {
  cfg.upscaler.config.Validate();
  const auto backend = superres::MakeUpscalerBackend(cfg.upscaler.backend, cfg.upscaler.config,
                                                     cfg.upscaler.fixture);
  const Manifest m = LoadManifest(a.manifest);
  RequireSafeIds(m);
  const fs::path out = a.out;
  fs::create_directories(out);
  std::vector<std::optional<std::string>> lines(m.samples.size());
  std::atomic<int> failures{0};
  ParallelFor(m.samples.size(), cfg.workers, [&](std::size_t i) {
    const Sample& s = m.samples[i];
    try {
      const RasterImage up =
          superres::Upscale(ReadImage(m.Resolve(s.image)), *backend, cfg.upscaler.config);
      Sample o;
      o.id = s.id;
      o.image = s.id + ".png";
      o.text = s.text;
      if (s.pair) o.pair = fs::absolute(m.Resolve(*s.pair)).string();
      WritePng(up, out / o.image);
      lines[i] = FormatSampleLine(o);
      log::Info("sample_done", {{"sample_id", s.id}});
    } catch (const Error& e) {
      ++failures;
      log::Warn("sample_failed", {{"sample_id", s.id}, {"error", e.what()}});
    }
  });
  EmitLines(g, out / "manifest.jsonl", Lines(lines));
  return SampleExit(failures);
}

// --- recognize -------------------------------------------------------------

struct RecognizeArgs {
  std::string manifest;
  std::string out = "outcomes.jsonl";
};

int Recognize(const Globals& g, const RecognizeArgs& a, const PipelineConfig& cfg) {
  cfg.recognizer.provider.Validate();
  const auto recognizer = pipeline::MakeRecognizer(cfg);
  const Manifest m = LoadManifest(a.manifest);
  std::vector<std::optional<std::string>> lines(m.samples.size());
  std::atomic<int> failures{0};
  ParallelFor(m.samples.size(), cfg.workers, [&](std::size_t i) {
    const Sample& s = m.samples[i];
    try {
      const auto outcome = recognizer->Transcribe(ReadImage(m.Resolve(s.image)), s.id);
      if (outcome.transport_error) {
        ++failures;
        log::Warn("sample_failed", {{"sample_id", s.id}, {"error", *outcome.transport_error}});
      } else {
        log::Info("sample_done", {{"sample_id", s.id}, {"refusal", outcome.refusal}});
      }
      lines[i] = recognize::ToJson(outcome).dump();
    } catch (const Error& e) {
      ++failures;
      log::Warn("sample_failed", {{"sample_id", s.id}, {"error", e.what()}});
    }
  });
  EmitLines(g, a.out, Lines(lines));
  log::Info("recognize_done", {{"network_calls", recognizer->network_calls()}});
  return SampleExit(failures);
}

// --- pipeline --------------------------------------------------------------

struct PipelineArgs {
  std::string manifest;
};

int RunPipelineCommand(const Globals& g, const PipelineArgs& a, const PipelineConfig& cfg) {
  const Manifest m = LoadManifest(a.manifest);
  const pipeline::RunSummary summary = pipeline::RunPipeline(m, cfg);
  if (g.to_stdout) {
    for (const auto& r : summary.records) *g.out << pipeline::RecordToJson(r).dump() << "\n";
  }
  return SampleExit(summary.failed_samples);
}

// --- eval-det --------------------------------------------------------------

struct EvalDetArgs {
  std::string pred;
  std::string ref;
  std::vector<std::string> tasks;
  ReportOutput report;
};

int EvalDet(const Globals& g, const EvalDetArgs& a) {
  const auto preds = detect::LoadDetectionRecords(a.pred);
  const Manifest gt = LoadManifest(a.ref);
  std::set<detect::Task> tasks;
  for (const auto& t : a.tasks) tasks.insert(detect::ParseTask(t));
  if (tasks.empty()) {
    for (const auto& p : preds) tasks.insert(p.task);
  }
  if (tasks.empty()) throw ValidationError(a.pred + " holds no detection records");
  std::vector<bench::DetectionRow> rows;
  for (detect::Task t : tasks) rows.push_back(bench::EvalDetection(gt, preds, t));
  a.report.Emit(g, bench::DetectionReport(rows, bench::ReportFormat::kMachine),
                bench::DetectionReport(rows, bench::ReportFormat::kMarkdown));
  return kExitOk;
}

// --- eval-ocr --------------------------------------------------------------

struct EvalOcrArgs {
  std::string ref;
  std::vector<std::string> hyp;
  std::vector<std::string> low;
  std::vector<std::string> high;
  std::string tier = "high";
  std::string model;
  bool compare = false;
  double failure_threshold = 0.5;
  bool penalize_refusals = false;
  bool keep_zero_width = false;
  bool keep_bidi_controls = false;
  bool keep_whitespace = false;
  ReportOutput report;
};

// Model name of one hypotheses file: --model, else the name the outcomes
// carry, else the file name up to its first dot.
std::string ModelNameFor(const std::string& path, const std::vector<bench::Hypothesis>& hyps,
                         const std::string& override_name) {
  if (!override_name.empty()) return override_name;
  std::set<std::string> names;
  for (const auto& h : hyps) {
    if (!h.model_name.empty()) names.insert(h.model_name);
  }
  if (names.size() > 1) {
    throw ValidationError(path + " mixes outcomes of several models; pass --model");
  }
  if (names.size() == 1) return *names.begin();
  const std::string file = fs::path(path).filename().string();
  return file.substr(0, file.find('.'));
}

int EvalOcr(const Globals& g, const EvalOcrArgs& a) {
  const Manifest m = LoadManifest(a.ref);
  bench::OcrEvalOptions opts;
  opts.failure_threshold = a.failure_threshold;
  opts.penalize_refusals = a.penalize_refusals;
  opts.policy.strip_zero_width = !a.keep_zero_width;
  opts.policy.strip_bidi_controls = !a.keep_bidi_controls;
  opts.policy.collapse_whitespace = !a.keep_whitespace;

  std::vector<std::pair<std::string, bench::Tier>> inputs;
  for (const auto& p : a.hyp) inputs.emplace_back(p, bench::ParseTier(a.tier));
  for (const auto& p : a.low) inputs.emplace_back(p, bench::Tier::kLow);
  for (const auto& p : a.high) inputs.emplace_back(p, bench::Tier::kHigh);
  if (inputs.empty()) throw ConfigError("pass at least one of --hyp, --low, --high");
  if (!a.model.empty() && inputs.size() > 2) {
    throw ConfigError("--model names a single model; drop it when scoring several files");
  }

  std::vector<bench::OcrBenchResult> results;
  for (const auto& [path, tier] : inputs) {
    const auto hyps = bench::LoadHypotheses(path);
    const std::string model = ModelNameFor(path, hyps, a.model);
    results.push_back(bench::EvalOcr(m, hyps, model, tier, opts));
    const auto& r = results.back();
    log::Info("ocr_scored", {{"model", model},
                             {"tier", bench::TierName(tier)},
                             {"scored", r.scored_count},
                             {"refusals", r.refusal_count},
                             {"errors", r.error_count},
                             {"failed", r.failed_flag}});
    for (const auto& d : r.diagnostics) log::Warn("ocr_diagnostic", {{"model", model}, {"message", d}});
  }
  if (!a.compare) {
    a.report.Emit(g, bench::OcrReport(results, bench::ReportFormat::kMachine),
                  bench::OcrReport(results, bench::ReportFormat::kMarkdown));
    return kExitOk;
  }
  std::map<std::string, std::pair<const bench::OcrBenchResult*, const bench::OcrBenchResult*>>
      tiers;
  for (const auto& r : results) {
    auto& slot = tiers[r.model_name];
    (r.tier == bench::Tier::kLow ? slot.first : slot.second) = &r;
  }
  std::vector<bench::TierComparison> comparisons;
  for (const auto& [model, pair] : tiers) {
    if (!pair.first || !pair.second) {
      throw ValidationError("--compare needs a low and a high result for model " + model);
    }
    comparisons.push_back(bench::CompareTiers(*pair.first, *pair.second));
  }
  a.report.Emit(g, bench::ComparisonReport(comparisons, bench::ReportFormat::kMachine),
                bench::ComparisonReport(comparisons, bench::ReportFormat::kMarkdown));
  return kExitOk;
}

// --- eval-psnr -------------------------------------------------------------

struct EvalPsnrArgs {
  std::string pairs;
  std::string mode = "rgb";
  ReportOutput report;
};

int EvalPsnr(const Globals& g, const EvalPsnrArgs& a) {
  const metrics::PsnrMode mode =
      a.mode == "luma" ? metrics::PsnrMode::kLuma : metrics::PsnrMode::kRgb;
  const Manifest m = LoadManifest(a.pairs);
  std::vector<superres::SrPair> pairs;
  std::vector<std::string> unpaired;
  for (const auto& s : m.samples) {
    if (!s.pair) {
      unpaired.push_back(s.id);
      continue;
    }
    pairs.push_back({s.id, m.Resolve(s.image), m.Resolve(*s.pair)});
  }
  if (!unpaired.empty()) {
    std::string ids;
    for (const auto& id : unpaired) ids += (ids.empty() ? "" : ", ") + id;
    throw ValidationError("samples without a 'pair' reference: " + ids);
  }
  const superres::SrScore score = superres::ScoreSrPairs(pairs, mode);
  for (const auto& p : score.pairs) {
    if (p.error) log::Warn("pair_failed", {{"id", p.id}, {"error", *p.error}});
  }
  a.report.Emit(g, bench::PsnrReport(score, mode, bench::ReportFormat::kMachine),
                bench::PsnrReport(score, mode, bench::ReportFormat::kMarkdown));
  return SampleExit(score.failed_count);
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
  std::string in;
  std::string format = "markdown";
  std::string out;
};

int Report(const Globals& g, const ReportArgs& a) {
  if (a.out.empty() && !g.to_stdout) throw ConfigError("report needs --out FILE or --stdout");
  const std::string text =
      bench::RenderReport(bench::LoadMachineReport(a.in), bench::ParseReportFormat(a.format));
  EmitLines(g, a.out, text);
  return kExitOk;
}

// --- dispatch --------------------------------------------------------------

std::int64_t NameDistance(const std::string& a, const std::string& b) {
  const std::u32string ua = metrics::DecodeUtf8(a);
  const std::u32string ub = metrics::DecodeUtf8(b);
  return metrics::Align(std::span<const char32_t>(ua), std::span<const char32_t>(ub)).Total();
}

// Closest long option name to `arg`, for unknown-flag messages.
std::optional<std::string> Suggest(const CLI::App& app, const std::string& arg) {
  std::string flag = arg.substr(0, arg.find('='));
  if (flag.rfind("--", 0) != 0) return std::nullopt;
  flag = flag.substr(2);
  std::optional<std::string> best;
  std::int64_t best_dist = std::max<std::int64_t>(2, static_cast<std::int64_t>(flag.size()) / 3) + 1;
  auto consider = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      for (const std::string& name : opt->get_lnames()) {
        const auto d = NameDistance(flag, name);
        if (d < best_dist) {
          best_dist = d;
          best = "--" + name;
        }
      }
    }
  };
  consider(app);
  if (app.get_parent() != nullptr) consider(*app.get_parent());
  return best;
}

std::optional<std::string> SuggestSubcommand(const CLI::App& app, const std::string& arg) {
  std::optional<std::string> best;
  std::int64_t best_dist = 3;
  for (const CLI::App* sub : app.get_subcommands({})) {
    const auto d = NameDistance(arg, sub->get_name());
    if (d < best_dist) {
      best_dist = d;
      best = sub->get_name();
    }
  }
  return best;
}

int UsageError(const std::string& message) {
  log::Error("usage", {{"message", message}});
  return kExitUsage;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Urdu newspaper OCR: layout detection, super-resolution, LLM transcription "
               "and evaluation.",
               "newsocr"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.allow_extras();
  Globals g;
  g.out = &out;
  app.add_option("--log", g.log_format, "diagnostic format on stderr")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->capture_default_str();
  app.add_option("--log-level", g.log_level, "minimum diagnostic level")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}))
      ->capture_default_str();
  app.add_flag("--stdout", g.to_stdout, "write machine output to stdout instead of files");

  int degrade_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  DegradeArgs degrade;
  CLI::App* c_degrade = app.add_subcommand("degrade", "build low/high resolution training pairs");
  c_degrade->add_option("--manifest", degrade.manifest, "input manifest")->required();
  c_degrade->add_option("--out", degrade.out, "output directory")->required();
  c_degrade->add_option("--scale", degrade.spec.scale_factor, "downsampling factor")
      ->capture_default_str();
  c_degrade->add_option("--quality-reduction", degrade.spec.quality_reduction,
                        "JPEG quality points below --base-quality")
      ->capture_default_str();
  c_degrade->add_option("--base-quality", degrade.spec.base_quality, "starting JPEG quality")
      ->capture_default_str();
  c_degrade->add_option("--workers", degrade_workers, "images processed in parallel");

  SegmentArgs segment;
  ConfigFlags segment_cfg;
  CLI::App* c_segment = app.add_subcommand("segment", "detect article or column regions");
  c_segment->add_option("--manifest", segment.manifest, "input manifest")->required();
  c_segment->add_option("--task", segment.task, "which detector to run")
      ->check(CLI::IsMember({"article", "column"}))
      ->capture_default_str();
  c_segment->add_option("--out", segment.out, "detections export")->capture_default_str();
  c_segment->add_option("--crops", segment.crops, "also write region crops here");
  segment_cfg.Attach(c_segment);

  EnhanceArgs enhance;
  ConfigFlags enhance_cfg;
  CLI::App* c_enhance = app.add_subcommand("enhance", "upscale every manifest image");
  c_enhance->add_option("--manifest", enhance.manifest, "input manifest")->required();
  c_enhance->add_option("--out", enhance.out, "output directory")->required();
  enhance_cfg.Attach(c_enhance);

  RecognizeArgs recog;
  ConfigFlags recog_cfg;
  CLI::App* c_recog = app.add_subcommand("recognize", "transcribe every manifest image");
  c_recog->add_option("--manifest", recog.manifest, "input manifest")->required();
  c_recog->add_option("--out", recog.out, "recognition outcomes")->capture_default_str();
  recog_cfg.Attach(c_recog);

  PipelineArgs pipe;
  ConfigFlags pipe_cfg;
  CLI::App* c_pipe = app.add_subcommand("pipeline", "run all four stages on a manifest");
  c_pipe->add_option("--manifest", pipe.manifest, "input manifest")->required();
  pipe_cfg.Attach(c_pipe);

  EvalDetArgs evdet;
  CLI::App* c_evdet = app.add_subcommand("eval-det", "score a detections export");
  c_evdet->add_option("--pred", evdet.pred, "detections export")->required();
  c_evdet->add_option("--ref", evdet.ref, "manifest with label files")->required();
  c_evdet->add_option("--task", evdet.tasks, "tasks to score (default: all present)")
      ->check(CLI::IsMember({"article", "column"}));
  evdet.report.Attach(c_evdet);

  EvalOcrArgs evocr;
  CLI::App* c_evocr = app.add_subcommand("eval-ocr", "score transcriptions with WER and CER");
  c_evocr->add_option("--ref", evocr.ref, "manifest with reference text")->required();
  c_evocr->add_option("--hyp", evocr.hyp, "outcomes or run records scored at --tier");
  c_evocr->add_option("--low", evocr.low, "outcomes or run records of the low tier");
  c_evocr->add_option("--high", evocr.high, "outcomes or run records of the high tier");
  c_evocr->add_option("--tier", evocr.tier, "tier of --hyp files")
      ->check(CLI::IsMember({"low", "high"}))
      ->capture_default_str();
  c_evocr->add_option("--model", evocr.model, "model name for a single model's files");
  c_evocr->add_flag("--compare", evocr.compare, "report per-model low vs high deltas");
  c_evocr->add_option("--failure-threshold", evocr.failure_threshold,
                      "refusal rate above which a tier is reported as Fail")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c_evocr->add_flag("--penalize-refusals", evocr.penalize_refusals,
                    "score refusals as empty transcripts instead of excluding them");
  c_evocr->add_flag("--keep-zero-width", evocr.keep_zero_width,
                    "do not strip zero-width characters");
  c_evocr->add_flag("--keep-bidi-controls", evocr.keep_bidi_controls,
                    "do not strip bidi control characters");
  c_evocr->add_flag("--keep-whitespace", evocr.keep_whitespace,
                    "do not collapse whitespace runs");
  evocr.report.Attach(c_evocr);

  EvalPsnrArgs evpsnr;
  CLI::App* c_evpsnr = app.add_subcommand("eval-psnr", "score upscaled images against references");
  c_evpsnr->add_option("--pairs", evpsnr.pairs, "manifest: image = output, pair = reference")
      ->required();
  c_evpsnr->add_option("--mode", evpsnr.mode, "PSNR colour handling")
      ->check(CLI::IsMember({"rgb", "luma"}))
      ->capture_default_str();
  evpsnr.report.Attach(c_evpsnr);

  ReportArgs rep;
  CLI::App* c_rep = app.add_subcommand("report", "re-render a machine report");
  c_rep->add_option("--in", rep.in, "machine report")->required()->check(CLI::ExistingFile);
  c_rep->add_option("--format", rep.format, "output format")
      ->check(CLI::IsMember({"markdown", "machine"}))
      ->capture_default_str();
  c_rep->add_option("--out", rep.out, "output file");

  // Unknown arguments fall through to the top level and are reported below
  // with a suggestion.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.get_subcommands().empty() && !args.empty() && args.front().rfind('-', 0) != 0) {
      std::string msg = "unknown subcommand '" + args.front() + "'";
      if (auto s = SuggestSubcommand(app, args.front())) msg += "; did you mean '" + *s + "'?";
      return UsageError(msg);
    }
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    log::Configure(log::ParseFormat(g.log_format), log::ParseLevel(g.log_level));
    CLI::App* sub = app.get_subcommands().front();
    const std::vector<std::string> extras = app.remaining();
    if (!extras.empty()) {
      std::string msg = "unknown argument '" + extras.front() + "'";
      if (auto s = Suggest(*sub, extras.front())) msg += "; did you mean '" + *s + "'?";
      return UsageError(msg);
    }
    if (sub == c_degrade) return Degrade(g, degrade, degrade_workers);
    if (sub == c_segment) return Segment(g, segment, segment_cfg.Build());
    if (sub == c_enhance) return Enhance(g, enhance, enhance_cfg.Build());
    if (sub == c_recog) return Recognize(g, recog, recog_cfg.Build());
    if (sub == c_pipe) return RunPipelineCommand(g, pipe, pipe_cfg.Build());
    if (sub == c_evdet) return EvalDet(g, evdet);
    if (sub == c_evocr) return EvalOcr(g, evocr);
    if (sub == c_evpsnr) return EvalPsnr(g, evpsnr);
    if (sub == c_rep) return Report(g, rep);
    return UsageError("no subcommand");
  } catch (const Error& e) {
    log::Error("fatal", {{"error", e.what()}});
    return kExitUsage;
  }
}

}  // namespace newsocr::cli
