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
#include "newsocr/pipeline.h"

#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/imageops.h"
#include "newsocr/jsonl.h"
#include "newsocr/log.h"
#include "newsocr/version.h"

namespace newsocr::pipeline {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Ms = std::chrono::duration<double, std::milli>;

json BoxJson(const BoundingBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

json OptionalString(const std::optional<std::string>& s) {
  return s ? json(*s) : json(nullptr);
}

// Ids become directory names, so anything that could escape output_root or
// collide with run files is refused.
std::string FileDigest(const fs::path& path) {
  return Sha256Hex(ReadFileBytes(path));
}

std::string UpscalerFingerprint(const PipelineConfig& config,
                                const superres::UpscalerBackend& backend) {
  json j = {{"backend", backend.Name()},
            {"scale", config.upscaler.config.scale},
            {"tile_size", config.upscaler.config.tile_size},
            {"tile_overlap", config.upscaler.config.tile_overlap}};
  if (config.upscaler.backend == superres::BackendKind::kNeural) {
    j["model_sha256"] = FileDigest(config.upscaler.config.model_path);
  } else if (config.upscaler.backend == superres::BackendKind::kReplay) {
    j["fixture_sha256"] = FileDigest(config.upscaler.fixture);
  }
  return Sha256Hex(j.dump());
}

class UpscaleCache {
 public:
  UpscaleCache(fs::path root, std::string fingerprint)
      : root_(std::move(root)), fingerprint_(std::move(fingerprint)) {}

  std::optional<RasterImage> Get(const std::string& crop_digest, int want_w, int want_h) const {
    const fs::path p = PathFor(crop_digest);
    std::error_code ec;
    if (!fs::exists(p, ec)) return std::nullopt;
    try {
      RasterImage img = ReadImage(p);
      if (img.width() != want_w || img.height() != want_h) return std::nullopt;
      return img;
    } catch (const Error&) {
      return std::nullopt;  // damaged entry: recompute and overwrite
    }
  }

  void Put(const std::string& crop_digest, const RasterImage& image) const {
    WritePng(image, PathFor(crop_digest));
  }

 private:
  fs::path PathFor(const std::string& crop_digest) const {
    const std::string key = Sha256Hex(crop_digest + "|" + fingerprint_);
    return root_ / key.substr(0, 2) / (key + ".png");
  }

  fs::path root_;
  std::string fingerprint_;
};

struct Context {
  const Manifest& manifest;
  const PipelineConfig& config;
  Backends& backends;
  const UpscaleCache* upscale_cache;
  std::atomic<int>& requests;
};

std::string Rel(const std::string& id, const std::string& leaf) { return id + "/" + leaf; }

void ProcessArticle(const Context& ctx, const RasterImage& page, PipelineRecord& rec,
                    ArticleResult& article) {
  const PipelineConfig& cfg = ctx.config;
  const fs::path& root = cfg.output_root;
  const std::string n = std::to_string(article.index);
  std::string stage = "upscale";
  auto clock = std::chrono::steady_clock::now;
  try {
    auto t0 = clock();
    const RasterImage crop = imageops::Crop(page, article.region.box, cfg.crop_padding);
    if (cfg.keep_intermediates) {
      article.crop_path = Rel(rec.sample_id, "articles/" + n + ".png");
      WritePng(crop, root / *article.crop_path);
    }
    const int scale = cfg.upscaler.config.scale;
    std::optional<RasterImage> upscaled;
    std::string crop_digest;
    if (ctx.upscale_cache) {
      crop_digest = ImageDigest(crop);
      upscaled = ctx.upscale_cache->Get(crop_digest, crop.width() * scale, crop.height() * scale);
    }
    if (!upscaled) {
      upscaled = superres::Upscale(crop, *ctx.backends.upscaler, cfg.upscaler.config);
      if (ctx.upscale_cache) ctx.upscale_cache->Put(crop_digest, *upscaled);
    }
    if (cfg.keep_intermediates) {
      article.upscaled_path = Rel(rec.sample_id, "upscaled/" + n + ".png");
      WritePng(*upscaled, root / *article.upscaled_path);
    }
    auto t1 = clock();
    rec.timings.upscale_ms += Ms(t1 - t0).count();

    stage = "detect_columns";
    const std::vector<Detection> columns = detect::ReadingOrder(
        detect::DetectRegions(*upscaled, *ctx.backends.column_detector,
                              cfg.column_detector.config),
        detect::Task::kColumn);
    auto t2 = clock();
    rec.timings.detect_columns_ms += Ms(t2 - t1).count();

    stage = "recognize";
    const double column_padding = cfg.crop_padding * scale;
    for (std::size_t m = 0; m < columns.size(); ++m) {
      ColumnResult col;
      col.index = static_cast<int>(m);
      col.region = columns[m];
      const RasterImage ccrop = imageops::Crop(*upscaled, col.region.box, column_padding);
      if (cfg.keep_intermediates) {
        col.crop_path = Rel(rec.sample_id, "columns/" + n + "_" + std::to_string(m) + ".png");
        WritePng(ccrop, root / *col.crop_path);
      }
      ++ctx.requests;
      col.outcome = ctx.backends.recognizer->Transcribe(ccrop, rec.sample_id);
      if (col.outcome.from_cache) ++rec.cache_hits;
      if (col.outcome.transport_error) {
        rec.failures.push_back({"recognize", article.index,
                                "column " + std::to_string(m) + ": " +
                                    *col.outcome.transport_error});
      }
      article.columns.push_back(std::move(col));
    }
    std::vector<recognize::RecognitionOutcome> outcomes;
    for (const auto& c : article.columns) outcomes.push_back(c.outcome);
    article.text = recognize::StitchTranscripts(outcomes);
    rec.timings.recognize_ms += Ms(clock() - t2).count();
  } catch (const std::exception& e) {
    article.error = e.what();
    article.text.clear();
    rec.failures.push_back({stage, article.index, e.what()});
  }
  try {
    WriteFileText(root / article.text_path, article.text);
  } catch (const std::exception& e) {
    rec.failures.push_back({"write", article.index, e.what()});
  }
}

PipelineRecord ProcessSample(const Context& ctx, const Sample& sample) {
  PipelineRecord rec;
  rec.sample_id = sample.id;
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&]() -> PipelineRecord {
    rec.timings.total_ms = Ms(std::chrono::steady_clock::now() - start).count();
    return std::move(rec);
  };
  if (!IsFileSafeId(sample.id)) {
    rec.failures.push_back({"load", std::nullopt, "sample id is not usable as a directory name"});
    return finish();
  }
  std::optional<RasterImage> page;
  try {
    fs::remove_all(ctx.config.output_root / sample.id);
    page = ReadImage(ctx.manifest.Resolve(sample.image));
  } catch (const std::exception& e) {
    rec.failures.push_back({"load", std::nullopt, e.what()});
    return finish();
  }
  rec.image_digest = ImageDigest(*page);

  std::vector<Detection> regions;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    regions = detect::ReadingOrder(
        detect::DetectRegions(*page, *ctx.backends.article_detector,
                              ctx.config.article_detector.config),
        detect::Task::kArticle);
    rec.timings.detect_articles_ms = Ms(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& e) {
    rec.failures.push_back({"detect_articles", std::nullopt, e.what()});
    return finish();
  }
  if (regions.empty()) {
    rec.no_articles = true;
    return finish();
  }
  for (std::size_t n = 0; n < regions.size(); ++n) {
    ArticleResult article;
    article.index = static_cast<int>(n);
    article.region = regions[n];
    article.text_path = Rel(sample.id, "text/" + std::to_string(n) + ".txt");
    ProcessArticle(ctx, *page, rec, article);
    rec.articles.push_back(std::move(article));
  }
  return finish();
}

void CheckWritable(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create output_root " + root.string() + ": " + ec.message());
  const fs::path probe = root / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output_root " + root.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::string Lines(const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

std::optional<std::string> OptString(const json& j, const char* key, const std::string& src,
                                     int line) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return RequireString(j, key, src, line);
}

Detection DetectionFrom(const json& j, const std::string& src, int line) {
  const json& box = RequireField(j, "box", src, line);
  if (!box.is_array() || box.size() != 4) throw ParseError(src, line, "'box' must be 4 numbers");
  Detection d;
  d.box = BoundingBox::Make(box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                            box[3].get<double>());
  d.class_id = static_cast<int>(RequireNumber(j, "class_id", src, line));
  d.confidence = RequireNumber(j, "confidence", src, line);
  return d;
}

}  // namespace

int PipelineRecord::ColumnCount() const {
  int n = 0;
  for (const auto& a : articles) n += static_cast<int>(a.columns.size());
  return n;
}

json RecordToJson(const PipelineRecord& r) {
  json articles = json::array();
  for (const auto& a : r.articles) {
    json columns = json::array();
    for (const auto& c : a.columns) {
      json col = {{"index", c.index},
                  {"box", BoxJson(c.region.box)},
                  {"class_id", c.region.class_id},
                  {"confidence", c.region.confidence},
                  {"crop", OptionalString(c.crop_path)},
                  {"text", c.outcome.text},
                  {"refusal", c.outcome.refusal},
                  {"model_name", c.outcome.model_name},
                  {"raw_digest", c.outcome.raw_digest},
                  {"image_digest", c.outcome.image_digest}};
      if (c.outcome.transport_error) col["transport_error"] = *c.outcome.transport_error;
      columns.push_back(std::move(col));
    }
    json art = {{"index", a.index},
                {"box", BoxJson(a.region.box)},
                {"class_id", a.region.class_id},
                {"confidence", a.region.confidence},
                {"crop", OptionalString(a.crop_path)},
                {"upscaled", OptionalString(a.upscaled_path)},
                {"columns", std::move(columns)},
                {"text", a.text},
                {"text_path", a.text_path}};
    if (a.error) art["error"] = *a.error;
    articles.push_back(std::move(art));
  }
  json failures = json::array();
  for (const auto& f : r.failures) {
    json fj = {{"stage", f.stage}, {"message", f.message}};
    if (f.article) fj["article"] = *f.article;
    failures.push_back(std::move(fj));
  }
  return {{"sample_id", r.sample_id},
          {"image_digest", r.image_digest},
          {"no_articles", r.no_articles},
          {"articles", std::move(articles)},
          {"failures", std::move(failures)}};
}

PipelineRecord RecordFromJson(const json& j, const std::string& src, int line) {
  PipelineRecord r;
  try {
    r.sample_id = RequireString(j, "sample_id", src, line);
    r.image_digest = RequireString(j, "image_digest", src, line);
    r.no_articles = RequireField(j, "no_articles", src, line).get<bool>();
    for (const json& a : RequireField(j, "articles", src, line)) {
      ArticleResult art;
      art.index = static_cast<int>(RequireNumber(a, "index", src, line));
      art.region = DetectionFrom(a, src, line);
      art.crop_path = OptString(a, "crop", src, line);
      art.upscaled_path = OptString(a, "upscaled", src, line);
      art.text = RequireString(a, "text", src, line);
      art.text_path = RequireString(a, "text_path", src, line);
      art.error = OptString(a, "error", src, line);
      for (const json& c : RequireField(a, "columns", src, line)) {
        ColumnResult col;
        col.index = static_cast<int>(RequireNumber(c, "index", src, line));
        col.region = DetectionFrom(c, src, line);
        col.crop_path = OptString(c, "crop", src, line);
        col.outcome.sample_id = r.sample_id;
        col.outcome.text = RequireString(c, "text", src, line);
        col.outcome.refusal = RequireField(c, "refusal", src, line).get<bool>();
        col.outcome.model_name = RequireString(c, "model_name", src, line);
        col.outcome.raw_digest = RequireString(c, "raw_digest", src, line);
        col.outcome.image_digest = RequireString(c, "image_digest", src, line);
        col.outcome.transport_error = OptString(c, "transport_error", src, line);
        art.columns.push_back(std::move(col));
      }
      r.articles.push_back(std::move(art));
    }
    for (const json& f : RequireField(j, "failures", src, line)) {
      StageFailure sf;
      sf.stage = RequireString(f, "stage", src, line);
      sf.message = RequireString(f, "message", src, line);
      if (f.contains("article")) sf.article = static_cast<int>(RequireNumber(f, "article", src, line));
      r.failures.push_back(std::move(sf));
    }
  } catch (const json::exception& e) {
    throw ParseError(src, line, std::string("malformed pipeline record: ") + e.what());
  }
  return r;
}

std::vector<PipelineRecord> LoadRunRecords(const fs::path& path) {
  std::vector<PipelineRecord> out;
  ForEachJsonLine(path, [&](const json& j, int line) {
    out.push_back(RecordFromJson(j, path.string(), line));
  });
  return out;
}

json TimingsToJson(const PipelineRecord& r) {
  return {{"sample_id", r.sample_id},
          {"cache_hits", r.cache_hits},
          {"stage_ms",
           {{"detect_articles", r.timings.detect_articles_ms},
            {"upscale", r.timings.upscale_ms},
            {"detect_columns", r.timings.detect_columns_ms},
            {"recognize", r.timings.recognize_ms},
            {"total", r.timings.total_ms}}}};
}

std::shared_ptr<recognize::Recognizer> MakeRecognizer(const PipelineConfig& config,
                                                      std::shared_ptr<Transport> transport) {
  const auto& provider = config.recognizer.provider;
  std::shared_ptr<recognize::ResponseCache> cache;
  if (provider.mode == recognize::ProviderMode::kLive) {
    if (!transport) transport = std::make_shared<HttpsTransport>();
    if (config.recognizer.use_cache) {
      cache = std::make_shared<recognize::ResponseCache>(config.EffectiveCacheDir());
    }
  }
  return std::make_shared<recognize::Recognizer>(
      provider, recognize::BuiltinPromptProfile(config.recognizer.prompt_profile),
      std::move(transport), std::move(cache));
}

Backends MakeBackends(const PipelineConfig& config, std::shared_ptr<Transport> transport) {
  config.Validate();
  Backends b;
  b.article_detector = detect::MakeDetectorBackend(
      config.article_detector.backend, config.article_detector.config,
      config.article_detector.fixture);
  b.upscaler = superres::MakeUpscalerBackend(config.upscaler.backend, config.upscaler.config,
                                             config.upscaler.fixture);
  b.column_detector = detect::MakeDetectorBackend(
      config.column_detector.backend, config.column_detector.config,
      config.column_detector.fixture);
  b.upscaler_fingerprint = UpscalerFingerprint(config, *b.upscaler);

  b.recognizer = MakeRecognizer(config, std::move(transport));
  return b;
}

RunSummary RunPipeline(const Manifest& manifest, const PipelineConfig& config) {
  config.Validate();
  CheckWritable(config.output_root);
  Backends backends = MakeBackends(config);
  return RunPipeline(manifest, config, backends);
}

RunSummary RunPipeline(const Manifest& manifest, const PipelineConfig& config,
                       Backends& backends) {
  config.Validate();
  CheckWritable(config.output_root);
  std::optional<UpscaleCache> upscale_cache;
  if (config.upscaler.use_cache) {
    upscale_cache.emplace(config.output_root / ".cache" / "upscaled",
                          backends.upscaler_fingerprint);
  }
  std::atomic<int> requests{0};
  const Context ctx{manifest, config, backends, upscale_cache ? &*upscale_cache : nullptr,
                    requests};

  const std::size_t n = manifest.samples.size();
  RunSummary summary;
  summary.config_digest = ConfigDigest(config);
  summary.records.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const Sample& sample = manifest.samples[i];
      PipelineRecord rec;
      try {
        rec = ProcessSample(ctx, sample);
      } catch (const std::exception& e) {
        rec.sample_id = sample.id;
        rec.failures.push_back({"internal", std::nullopt, e.what()});
      }
      log::Event(rec.Failed() ? log::Level::kWarn : log::Level::kInfo, "sample_done",
                 {{"sample_id", rec.sample_id},
                  {"articles", rec.articles.size()},
                  {"columns", rec.ColumnCount()},
                  {"failures", rec.failures.size()},
                  {"no_articles", rec.no_articles},
                  {"ms", rec.timings.total_ms}});
      summary.records[i] = std::move(rec);
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(config.workers, std::max<std::size_t>(n, 1)));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<json> run_rows, timing_rows;
  int total_columns = 0;
  for (const auto& r : summary.records) {
    if (r.Failed()) ++summary.failed_samples;
    total_columns += r.ColumnCount();
    run_rows.push_back(RecordToJson(r));
    timing_rows.push_back(TimingsToJson(r));
  }
  summary.recognition_requests = requests.load();

  const fs::path& root = config.output_root;
  WriteFileText(root / "run.jsonl", Lines(run_rows));
  WriteFileText(root / "timings.jsonl", Lines(timing_rows));
  const double scale = config.upscaler.config.scale;
  const json run = {
      {"schema_version", kRunSchemaVersion},
      {"tool", "newsocr"},
      {"version", kVersion},
      {"config_digest", summary.config_digest},
      {"config", EffectiveConfigJson(config)},
      {"manifest", {{"split", manifest.split_name}, {"samples", n}}},
      {"decisions",
       {{"article_crop_padding_px", config.crop_padding},
        {"column_crop_padding_px", config.crop_padding * scale},
        {"article_order", "rows top to bottom, right to left within a row"},
        {"column_order", "centre x descending, ties top to bottom"},
        {"column_transcription", "independent, then stitched"},
        {"stitch_separator", "\n"},
        {"unreadable_token", recognize::kUnreadableToken},
        {"prompt_profile", backends.recognizer->profile().name},
        {"upscaler_backend", backends.upscaler->Name()},
        {"upscaler_fingerprint", backends.upscaler_fingerprint}}},
      {"results",
       {{"failed_samples", summary.failed_samples},
        {"recognition_requests", summary.recognition_requests},
        {"total_columns", total_columns}}}};
  WriteFileText(root / "run.json", run.dump(2) + "\n");
  log::Info("run_done", {{"samples", n},
                         {"failed_samples", summary.failed_samples},
                         {"recognition_requests", summary.recognition_requests},
                         {"config_digest", summary.config_digest}});
  return summary;
}

std::string SampleText(const PipelineRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.articles.size(); ++i) {
    if (i > 0) out += '\n';
    out += record.articles[i].text;
  }
  return out;
}

}  // namespace newsocr::pipeline
