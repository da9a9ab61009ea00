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
#include "newsocr/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "newsocr/error.h"
#include "newsocr/jsonl.h"

namespace newsocr::bench {
namespace {

using nlohmann::json;

constexpr char kArrow[] = " → ";

json Nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> OptNumber(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json EditsJson(const metrics::EditCounts& e) {
  return {{"substitutions", e.substitutions},
          {"insertions", e.insertions},
          {"deletions", e.deletions}};
}

metrics::EditCounts EditsFrom(const json& j) {
  metrics::EditCounts e;
  e.substitutions = j.at("substitutions").get<std::int64_t>();
  e.insertions = j.at("insertions").get<std::int64_t>();
  e.deletions = j.at("deletions").get<std::int64_t>();
  return e;
}

json ScoreJson(const metrics::OcrScore& s) {
  return {{"wer", s.wer},
          {"cer", s.cer},
          {"word_edits", EditsJson(s.word_edits)},
          {"char_edits", EditsJson(s.char_edits)},
          {"reference_tokens", s.reference_token_count},
          {"reference_chars", s.reference_char_count}};
}

metrics::OcrScore ScoreFrom(const json& j) {
  metrics::OcrScore s;
  s.wer = j.at("wer").get<double>();
  s.cer = j.at("cer").get<double>();
  s.word_edits = EditsFrom(j.at("word_edits"));
  s.char_edits = EditsFrom(j.at("char_edits"));
  s.reference_token_count = j.at("reference_tokens").get<std::int64_t>();
  s.reference_char_count = j.at("reference_chars").get<std::int64_t>();
  return s;
}

SampleStatus ParseStatus(const std::string& s) {
  for (auto st : {SampleStatus::kScored, SampleStatus::kRefusal, SampleStatus::kTransportError,
                  SampleStatus::kPenalized}) {
    if (SampleStatusName(st) == s) return st;
  }
  throw ValidationError("unknown sample status '" + s + "'");
}

json OcrJson(const OcrBenchResult& r) {
  json per_sample = json::array();
  for (const auto& s : r.per_sample) {
    per_sample.push_back({{"sample_id", s.sample_id},
                          {"status", SampleStatusName(s.status)},
                          {"score", s.score ? ScoreJson(*s.score) : json(nullptr)}});
  }
  return {{"model_name", r.model_name},
          {"tier", TierName(r.tier)},
          {"mean_wer", Nullable(r.mean_wer)},
          {"mean_cer", Nullable(r.mean_cer)},
          {"refusal_rate", r.refusal_rate},
          {"sample_count", r.sample_count},
          {"scored_count", r.scored_count},
          {"refusal_count", r.refusal_count},
          {"error_count", r.error_count},
          {"failed_flag", r.failed_flag},
          {"failure_threshold", r.failure_threshold},
          {"penalized_refusals", r.penalized_refusals},
          {"word_edits", EditsJson(r.word_edits)},
          {"char_edits", EditsJson(r.char_edits)},
          {"reference_tokens", r.reference_tokens},
          {"reference_chars", r.reference_chars},
          {"per_sample", std::move(per_sample)},
          {"diagnostics", r.diagnostics}};
}

OcrBenchResult OcrFrom(const json& j) {
  OcrBenchResult r;
  r.model_name = j.at("model_name").get<std::string>();
  r.tier = ParseTier(j.at("tier").get<std::string>());
  r.mean_wer = OptNumber(j, "mean_wer");
  r.mean_cer = OptNumber(j, "mean_cer");
  r.refusal_rate = j.at("refusal_rate").get<double>();
  r.sample_count = j.at("sample_count").get<int>();
  r.scored_count = j.at("scored_count").get<int>();
  r.refusal_count = j.at("refusal_count").get<int>();
  r.error_count = j.at("error_count").get<int>();
  r.failed_flag = j.at("failed_flag").get<bool>();
  r.failure_threshold = j.at("failure_threshold").get<double>();
  r.penalized_refusals = j.at("penalized_refusals").get<bool>();
  r.word_edits = EditsFrom(j.at("word_edits"));
  r.char_edits = EditsFrom(j.at("char_edits"));
  r.reference_tokens = j.at("reference_tokens").get<std::int64_t>();
  r.reference_chars = j.at("reference_chars").get<std::int64_t>();
  for (const json& s : j.at("per_sample")) {
    SampleOcr row;
    row.sample_id = s.at("sample_id").get<std::string>();
    row.status = ParseStatus(s.at("status").get<std::string>());
    if (!s.at("score").is_null()) row.score = ScoreFrom(s.at("score"));
    r.per_sample.push_back(std::move(row));
  }
  r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return r;
}

json DetectionJson(const DetectionRow& row) {
  json per = json::array();
  for (const auto& [t, ap] : row.score.per_threshold_ap) per.push_back({{"iou", t}, {"ap", ap}});
  return {{"task", detect::TaskName(row.task)},
          {"precision", row.score.precision},
          {"recall", row.score.recall},
          {"map50", row.score.map50},
          {"map50_95", row.score.map50_95},
          {"per_threshold_ap", std::move(per)},
          {"operating_confidence", Nullable(row.score.operating_confidence)},
          {"evaluated_classes", row.score.evaluated_classes},
          {"ground_truth_count", row.score.ground_truth_count},
          {"detection_count", row.score.detection_count}};
}

DetectionRow DetectionFrom(const json& j) {
  DetectionRow row;
  row.task = detect::ParseTask(j.at("task").get<std::string>());
  row.score.precision = j.at("precision").get<double>();
  row.score.recall = j.at("recall").get<double>();
  row.score.map50 = j.at("map50").get<double>();
  row.score.map50_95 = j.at("map50_95").get<double>();
  for (const json& p : j.at("per_threshold_ap")) {
    row.score.per_threshold_ap.emplace_back(p.at("iou").get<double>(), p.at("ap").get<double>());
  }
  row.score.operating_confidence = OptNumber(j, "operating_confidence");
  row.score.evaluated_classes = j.at("evaluated_classes").get<std::vector<int>>();
  row.score.ground_truth_count = j.at("ground_truth_count").get<std::int64_t>();
  row.score.detection_count = j.at("detection_count").get<std::int64_t>();
  return row;
}

json ComparisonJson(const TierComparison& c) {
  json deltas = json::array();
  for (const auto& d : c.deltas) {
    deltas.push_back({{"sample_id", d.sample_id},
                      {"low_wer", d.low_wer},
                      {"high_wer", d.high_wer},
                      {"delta", d.delta}});
  }
  return {{"model_name", c.model_name},
          {"low", OcrJson(c.low)},
          {"high", OcrJson(c.high)},
          {"deltas", std::move(deltas)},
          {"mean_delta_wer", Nullable(c.mean_delta)},
          {"improved", c.improved},
          {"regressed", c.regressed},
          {"unchanged", c.unchanged}};
}

TierComparison ComparisonFrom(const json& j) {
  TierComparison c;
  c.model_name = j.at("model_name").get<std::string>();
  c.low = OcrFrom(j.at("low"));
  c.high = OcrFrom(j.at("high"));
  for (const json& d : j.at("deltas")) {
    c.deltas.push_back({d.at("sample_id").get<std::string>(), d.at("low_wer").get<double>(),
                        d.at("high_wer").get<double>(), d.at("delta").get<double>()});
  }
  c.mean_delta = OptNumber(j, "mean_delta_wer");
  c.improved = j.at("improved").get<int>();
  c.regressed = j.at("regressed").get<int>();
  c.unchanged = j.at("unchanged").get<int>();
  return c;
}

std::string_view PsnrModeName(metrics::PsnrMode m) {
  return m == metrics::PsnrMode::kRgb ? "rgb" : "luma";
}

std::string Header(const std::string& kind, const json& metadata) {
  return json{{"schema", kReportSchema},
              {"schema_version", kReportSchemaVersion},
              {"kind", kind},
              {"metadata", metadata}}
             .dump() +
         "\n";
}

std::string Cell(const std::optional<double>& v) { return v ? FormatFixed3(*v) : "n/a"; }

// Cells of one tier in the OCR tables.
std::string WerCell(const OcrBenchResult* r) {
  if (r == nullptr) return "n/a";
  return r->failed_flag ? "Fail" : Cell(r->mean_wer);
}
std::string CerCell(const OcrBenchResult* r) {
  if (r == nullptr) return "n/a";
  return r->failed_flag ? "Fail" : Cell(r->mean_cer);
}

json OcrMetadata(std::span<const OcrBenchResult> results) {
  json meta = {{"aggregation", "micro"}};
  if (results.empty()) return meta;
  const double threshold = results[0].failure_threshold;
  const bool penalize = results[0].penalized_refusals;
  for (const auto& r : results) {
    if (r.failure_threshold != threshold || r.penalized_refusals != penalize) {
      throw ValidationError("results were scored with different refusal settings");
    }
  }
  meta["failure_threshold"] = threshold;
  meta["refusals"] = penalize ? "penalized" : "excluded";
  return meta;
}

std::string OcrFootnote(const json& meta) {
  return "\nWER and CER: micro-averaged over scored samples. Refusals: " +
         std::string(meta.at("refusals") == "penalized" ? "scored as empty transcripts"
                                                        : "excluded") +
         ". Fail: refusal rate above " + FormatFixed3(meta.at("failure_threshold").get<double>()) +
         ".\n";
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "machine") return ReportFormat::kMachine;
  if (name == "markdown") return ReportFormat::kMarkdown;
  throw ConfigError("unknown report format '" + std::string(name) + "' (machine, markdown)");
}

std::string FormatFixed3(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // glibc rounds the exact binary value to nearest, ties to even.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string out(buf);
  if (out == "-0.000") out = "0.000";
  return out;
}

std::string DetectionReport(std::span<const DetectionRow> rows, ReportFormat format) {
  const DetectionRow* by_task[2] = {nullptr, nullptr};
  for (const auto& r : rows) {
    const DetectionRow*& slot = by_task[r.task == detect::Task::kArticle ? 0 : 1];
    if (slot != nullptr) {
      throw ValidationError("two detection rows for task " + std::string(detect::TaskName(r.task)));
    }
    slot = &r;
  }
  if (format == ReportFormat::kMachine) {
    std::string out = Header(
        "detection",
        {{"ap_interpolation", "101-point"},
         {"iou_thresholds", metrics::kIouThresholds},
         {"precision_recall", "micro-pooled at the best-F1 confidence"}});
    for (const DetectionRow* r : by_task) {
      if (r) out += DetectionJson(*r).dump() + "\n";
    }
    return out;
  }
  std::string out = "| Metric | Article | Column |\n|:--|--:|--:|\n";
  if (rows.empty()) return out;
  auto line = [&](const char* name, double metrics::DetectionScore::*field) {
    out += std::string("| ") + name;
    for (const DetectionRow* r : by_task) {
      out += " | " + (r ? FormatFixed3(r->score.*field) : std::string("n/a"));
    }
    out += " |\n";
  };
  line("Precision", &metrics::DetectionScore::precision);
  line("Recall", &metrics::DetectionScore::recall);
  line("mAP@50", &metrics::DetectionScore::map50);
  line("mAP@50:95", &metrics::DetectionScore::map50_95);
  return out;
}

std::string OcrReport(std::span<const OcrBenchResult> results, ReportFormat format) {
  std::map<std::string, std::pair<const OcrBenchResult*, const OcrBenchResult*>> by_model;
  for (const auto& r : results) {
    auto& slot = by_model[r.model_name];
    const OcrBenchResult*& cell = r.tier == Tier::kLow ? slot.first : slot.second;
    if (cell != nullptr) {
      throw ValidationError("two " + std::string(TierName(r.tier)) + " results for model " +
                            r.model_name);
    }
    cell = &r;
  }
  const json meta = OcrMetadata(results);
  if (format == ReportFormat::kMachine) {
    std::string out = Header("ocr", meta);
    for (const auto& [model, tiers] : by_model) {
      if (tiers.first) out += OcrJson(*tiers.first).dump() + "\n";
      if (tiers.second) out += OcrJson(*tiers.second).dump() + "\n";
    }
    return out;
  }
  std::string out =
      "| LLM | Low-Res WER | Low-Res CER | High-Res WER | High-Res CER |\n"
      "|:--|--:|--:|--:|--:|\n";
  if (results.empty()) return out;
  for (const auto& [model, tiers] : by_model) {
    out += "| " + model + " | " + WerCell(tiers.first) + " | " + CerCell(tiers.first) + " | " +
           WerCell(tiers.second) + " | " + CerCell(tiers.second) + " |\n";
  }
  return out + OcrFootnote(meta);
}

std::string ComparisonReport(std::span<const TierComparison> comparisons, ReportFormat format) {
  std::map<std::string, const TierComparison*> by_model;
  std::vector<OcrBenchResult> all;
  for (const auto& c : comparisons) {
    if (!by_model.emplace(c.model_name, &c).second) {
      throw ValidationError("two comparisons for model " + c.model_name);
    }
    all.push_back(c.low);
    all.push_back(c.high);
  }
  const json meta = OcrMetadata(all);
  if (format == ReportFormat::kMachine) {
    std::string out = Header("comparison", meta);
    for (const auto& [model, c] : by_model) out += ComparisonJson(*c).dump() + "\n";
    return out;
  }
  std::string out =
      "| LLM | WER | CER | Mean ΔWER | Improved | Regressed | Unchanged |\n"
      "|:--|:-:|:-:|--:|--:|--:|--:|\n";
  if (comparisons.empty()) return out;
  for (const auto& [model, c] : by_model) {
    out += "| " + model + " | " + WerCell(&c->low) + kArrow + WerCell(&c->high) + " | " +
           CerCell(&c->low) + kArrow + CerCell(&c->high) + " | " + Cell(c->mean_delta) + " | " +
           std::to_string(c->improved) + " | " + std::to_string(c->regressed) + " | " +
           std::to_string(c->unchanged) + " |\n";
  }
  return out + OcrFootnote(meta) +
         "Mean ΔWER: high-tier minus low-tier per-sample WER, over samples scored in both "
         "tiers.\n";
}

std::string PsnrReport(const superres::SrScore& score, metrics::PsnrMode mode,
                       ReportFormat format) {
  if (format == ReportFormat::kMachine) {
    std::string out = Header("psnr", {{"mode", PsnrModeName(mode)},
                                      {"mean", "arithmetic mean of finite per-pair PSNR"}});
    out += json{{"row", "summary"},
                {"pairs", score.pairs.size()},
                {"mean_psnr_db", Nullable(score.mean_psnr_db)},
                {"finite_count", score.finite_count},
                {"exact_count", score.exact_count},
                {"failed_count", score.failed_count}}
               .dump() +
           "\n";
    for (const auto& p : score.pairs) {
      json row = {{"row", "pair"}, {"id", p.id}};
      if (p.score) {
        row["mse"] = p.score->mse;
        row["exact"] = p.score->IsExact();
        row["psnr_db"] = p.score->IsExact() ? json(nullptr) : json(p.score->psnr_db);
      }
      if (p.error) row["error"] = *p.error;
      out += row.dump() + "\n";
    }
    return out;
  }
  std::string out =
      "| Pairs | Scored | Exact | Failed | Mean PSNR (dB) |\n|--:|--:|--:|--:|--:|\n";
  if (score.pairs.empty()) return out;
  out += "| " + std::to_string(score.pairs.size()) + " | " + std::to_string(score.finite_count) +
         " | " + std::to_string(score.exact_count) + " | " + std::to_string(score.failed_count) +
         " | " + (score.AllExact() ? std::string("inf") : Cell(score.mean_psnr_db)) + " |\n";
  out += "\nPSNR over " + std::string(mode == metrics::PsnrMode::kRgb ? "RGB samples" : "BT.601 luma") +
         "; mean of finite per-pair values.\n";
  return out;
}

LoadedReport ParseMachineReport(std::istream& in, const std::string& source) {
  LoadedReport report;
  bool have_header = false;
  ForEachJsonLine(in, source, [&](const json& j, int line) {
    try {
      if (!have_header) {
        if (j.value("schema", "") != kReportSchema) {
          throw ParseError(source, line, "not a newsocr machine report");
        }
        if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
          throw ParseError(source, line, "unsupported report schema version");
        }
        report.kind = j.at("kind").get<std::string>();
        if (report.kind == "psnr") {
          report.psnr_mode = j.at("metadata").at("mode") == "luma" ? metrics::PsnrMode::kLuma
                                                                   : metrics::PsnrMode::kRgb;
        }
        have_header = true;
        return;
      }
      if (report.kind == "detection") {
        report.detection.push_back(DetectionFrom(j));
      } else if (report.kind == "ocr") {
        report.ocr.push_back(OcrFrom(j));
      } else if (report.kind == "comparison") {
        report.comparison.push_back(ComparisonFrom(j));
      } else if (report.kind == "psnr") {
        if (j.at("row") == "summary") {
          report.psnr.mean_psnr_db = OptNumber(j, "mean_psnr_db");
          report.psnr.finite_count = j.at("finite_count").get<int>();
          report.psnr.exact_count = j.at("exact_count").get<int>();
          report.psnr.failed_count = j.at("failed_count").get<int>();
        } else {
          superres::PairScore p;
          p.id = j.at("id").get<std::string>();
          if (j.contains("mse")) {
            metrics::PsnrScore s;
            s.mse = j.at("mse").get<double>();
            s.psnr_db = j.at("exact").get<bool>() ? metrics::kInfinitePsnr
                                                  : j.at("psnr_db").get<double>();
            p.score = s;
          }
          if (j.contains("error")) p.error = j.at("error").get<std::string>();
          report.psnr.pairs.push_back(std::move(p));
        }
      } else {
        throw ParseError(source, line, "unknown report kind '" + report.kind + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(source, line, std::string("malformed report row: ") + e.what());
    } catch (const ValidationError& e) {
      throw ParseError(source, line, e.what());
    } catch (const ConfigError& e) {
      throw ParseError(source, line, e.what());
    }
  });
  if (!have_header) throw ParseError(source, 1, "empty report");
  return report;
}

LoadedReport LoadMachineReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return ParseMachineReport(in, path.string());
}

std::string RenderReport(const LoadedReport& r, ReportFormat format) {
  if (r.kind == "detection") return DetectionReport(r.detection, format);
  if (r.kind == "ocr") return OcrReport(r.ocr, format);
  if (r.kind == "comparison") return ComparisonReport(r.comparison, format);
  if (r.kind == "psnr") return PsnrReport(r.psnr, r.psnr_mode, format);
  throw ValidationError("unknown report kind '" + r.kind + "'");
}

}  // namespace newsocr::bench
