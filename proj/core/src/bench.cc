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
#include "newsocr/bench.h"

#include <algorithm>
#include <map>
#include <set>

#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/jsonl.h"
#include "newsocr/pipeline.h"

namespace newsocr::bench {
namespace {

using nlohmann::json;

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

double Ratio(std::int64_t num, std::int64_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

Hypothesis FromRunRecord(const pipeline::PipelineRecord& r) {
  Hypothesis h;
  h.sample_id = r.sample_id;
  h.text = pipeline::SampleText(r);
  int columns = 0, refusals = 0;
  for (const auto& a : r.articles) {
    if (a.error) h.transport_error = true;
    for (const auto& c : a.columns) {
      ++columns;
      if (c.outcome.refusal) ++refusals;
      if (c.outcome.transport_error) h.transport_error = true;
      if (h.model_name.empty()) h.model_name = c.outcome.model_name;
    }
  }
  h.refusal = columns > 0 && refusals == columns;
  if (r.Failed()) h.transport_error = true;
  return h;
}

}  // namespace

std::string_view TierName(Tier tier) { return tier == Tier::kLow ? "low" : "high"; }

Tier ParseTier(std::string_view name) {
  if (name == "low") return Tier::kLow;
  if (name == "high") return Tier::kHigh;
  throw ConfigError("unknown resolution tier '" + std::string(name) + "' (low, high)");
}

std::string_view SampleStatusName(SampleStatus s) {
  switch (s) {
    case SampleStatus::kScored: return "scored";
    case SampleStatus::kRefusal: return "refusal";
    case SampleStatus::kTransportError: return "transport_error";
    case SampleStatus::kPenalized: return "penalized";
  }
  return "scored";
}

std::vector<Hypothesis> LoadHypotheses(const std::filesystem::path& path) {
  std::vector<Hypothesis> out;
  const std::string src = path.string();
  ForEachJsonLine(path, [&](const json& j, int line) {
    if (j.contains("articles")) {
      out.push_back(FromRunRecord(pipeline::RecordFromJson(j, src, line)));
      return;
    }
    Hypothesis h;
    h.sample_id = RequireString(j, "sample_id", src, line);
    h.text = RequireString(j, "text", src, line);
    if (j.contains("refusal")) {
      if (!j.at("refusal").is_boolean()) throw ParseError(src, line, "'refusal' must be a boolean");
      h.refusal = j.at("refusal").get<bool>();
    }
    h.transport_error = j.contains("transport_error") && !j.at("transport_error").is_null();
    if (j.contains("model_name")) h.model_name = RequireString(j, "model_name", src, line);
    out.push_back(std::move(h));
  });
  return out;
}

OcrBenchResult EvalOcr(const Manifest& manifest, std::span<const Hypothesis> hypotheses,
                       const std::string& model_name, Tier tier,
                       const OcrEvalOptions& options) {
  std::map<std::string, const Hypothesis*> by_id;
  std::vector<std::string> unknown, duplicate;
  for (const Hypothesis& h : hypotheses) {
    if (manifest.Find(h.sample_id) == nullptr) {
      unknown.push_back(h.sample_id);
      continue;
    }
    if (!by_id.emplace(h.sample_id, &h).second) duplicate.push_back(h.sample_id);
  }
  if (!unknown.empty()) {
    throw ValidationError("outcomes reference samples missing from the manifest: " +
                          JoinIds(unknown));
  }
  if (!duplicate.empty()) {
    throw ValidationError("more than one outcome for samples: " + JoinIds(duplicate));
  }

  OcrBenchResult r;
  r.model_name = model_name;
  r.tier = tier;
  r.failure_threshold = options.failure_threshold;
  r.penalized_refusals = options.penalize_refusals;
  std::vector<std::string> no_reference;
  for (const Sample& s : manifest.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) continue;
    if (!s.text) {
      no_reference.push_back(s.id);
      continue;
    }
    const Hypothesis& h = *it->second;
    SampleOcr row;
    row.sample_id = s.id;
    ++r.sample_count;
    if (h.transport_error) {
      row.status = SampleStatus::kTransportError;
      ++r.error_count;
    } else if (h.refusal) {
      ++r.refusal_count;
      row.status = SampleStatus::kRefusal;
      if (options.penalize_refusals) {
        row.status = SampleStatus::kPenalized;
        row.score = metrics::WordErrorRate(*s.text, "", options.policy);
      }
    } else {
      row.score = metrics::WordErrorRate(*s.text, h.text, options.policy);
    }
    if (row.score) {
      ++r.scored_count;
      r.word_edits += row.score->word_edits;
      r.char_edits += row.score->char_edits;
      r.reference_tokens += row.score->reference_token_count;
      r.reference_chars += row.score->reference_char_count;
    }
    r.per_sample.push_back(std::move(row));
  }
  if (!no_reference.empty()) {
    throw ValidationError("samples without reference text: " + JoinIds(no_reference));
  }
  if (r.sample_count > 0) r.refusal_rate = Ratio(r.refusal_count, r.sample_count);
  r.failed_flag = r.refusal_rate > options.failure_threshold;
  if (r.scored_count > 0) {
    r.mean_wer = Ratio(r.word_edits.Total(), r.reference_tokens);
    r.mean_cer = Ratio(r.char_edits.Total(), r.reference_chars);
  } else {
    r.diagnostics.push_back("no usable samples: " + std::to_string(r.refusal_count) +
                            " refusals, " + std::to_string(r.error_count) +
                            " transport errors out of " + std::to_string(r.sample_count));
  }
  if (r.error_count > 0) {
    r.diagnostics.push_back(std::to_string(r.error_count) +
                            " samples excluded for transport errors");
  }
  return r;
}

TierComparison CompareTiers(const OcrBenchResult& low, const OcrBenchResult& high) {
  if (low.model_name != high.model_name) {
    throw ValidationError("cannot compare tiers of different models: " + low.model_name +
                          " vs " + high.model_name);
  }
  std::set<std::string> low_ids, high_ids;
  for (const auto& s : low.per_sample) low_ids.insert(s.sample_id);
  for (const auto& s : high.per_sample) high_ids.insert(s.sample_id);
  if (low_ids != high_ids) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(low_ids.begin(), low_ids.end(), high_ids.begin(),
                                  high_ids.end(), std::back_inserter(diff));
    throw ValidationError("tiers cover different samples: " + JoinIds(diff));
  }
  TierComparison c;
  c.model_name = low.model_name;
  c.low = low;
  c.high = high;
  std::map<std::string, const SampleOcr*> high_by_id;
  for (const auto& s : high.per_sample) high_by_id[s.sample_id] = &s;
  double low_sum = 0, high_sum = 0;
  for (const auto& l : low.per_sample) {
    const SampleOcr& h = *high_by_id.at(l.sample_id);
    if (!l.score || !h.score) continue;
    SampleDelta d{l.sample_id, l.score->wer, h.score->wer, h.score->wer - l.score->wer};
    low_sum += d.low_wer;
    high_sum += d.high_wer;
    if (d.delta < 0) {
      ++c.improved;
    } else if (d.delta > 0) {
      ++c.regressed;
    } else {
      ++c.unchanged;
    }
    c.deltas.push_back(d);
  }
  if (!c.deltas.empty()) {
    const double n = static_cast<double>(c.deltas.size());
    c.mean_delta = high_sum / n - low_sum / n;
  }
  return c;
}

DetectionRow EvalDetection(const Manifest& ground_truth,
                           std::span<const detect::DetectionRecord> predictions,
                           detect::Task task) {
  std::map<std::string, const detect::DetectionRecord*> by_id;
  std::vector<std::string> unlabeled_ids, unknown, duplicate, missing, no_labels;
  for (const auto& rec : predictions) {
    if (rec.task != task) continue;
    if (!rec.sample_id) {
      unlabeled_ids.push_back(rec.image_digest.substr(0, 12));
      continue;
    }
    if (ground_truth.Find(*rec.sample_id) == nullptr) {
      unknown.push_back(*rec.sample_id);
    } else if (!by_id.emplace(*rec.sample_id, &rec).second) {
      duplicate.push_back(*rec.sample_id);
    }
  }
  std::vector<metrics::ImageDetections> images;
  for (const Sample& s : ground_truth.samples) {
    if (!s.labels) {
      no_labels.push_back(s.id);
      continue;
    }
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      missing.push_back(s.id);
      continue;
    }
    const RasterImage image = ReadImage(ground_truth.Resolve(s.image));
    const YoloLabels labels =
        LoadYoloLabels(ground_truth.Resolve(*s.labels), image.width(), image.height());
    images.push_back({it->second->detections, labels.boxes});
  }
  std::string problems;
  auto add = [&](const char* what, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    if (!problems.empty()) problems += "; ";
    problems += what + JoinIds(ids);
  };
  add("predictions without sample_id (digest prefix): ", unlabeled_ids);
  add("predictions for unknown samples: ", unknown);
  add("duplicate predictions: ", duplicate);
  add("samples without predictions: ", missing);
  add("samples without labels: ", no_labels);
  if (!problems.empty()) {
    throw ValidationError(std::string(detect::TaskName(task)) + " detection ids do not match: " +
                          problems);
  }
  return {task, metrics::ScoreDetections(images)};
}

}  // namespace newsocr::bench
