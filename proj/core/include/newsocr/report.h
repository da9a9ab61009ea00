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
#ifndef NEWSOCR_REPORT_H_
#define NEWSOCR_REPORT_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsocr/bench.h"
#include "newsocr/psnr.h"
#include "newsocr/superres.h"

// Reports come in two forms. MARKDOWN mirrors the familiar table layouts
// (metric x task for detection, model x {low, high} x {WER, CER} for OCR).
// MACHINE is JSON lines: a header object naming the schema, kind and
// scoring metadata, then one object per row. Both are byte-deterministic.
namespace newsocr::bench {

enum class ReportFormat { kMachine, kMarkdown };
ReportFormat ParseReportFormat(std::string_view name);  // machine, markdown

inline constexpr char kReportSchema[] = "newsocr.report";
inline constexpr int kReportSchemaVersion = 1;

// Three decimals, ties to even on the exact binary value; never "-0.000".
std::string FormatFixed3(double value);

std::string DetectionReport(std::span<const DetectionRow> rows, ReportFormat format);
// Rows are sorted by model name (byte order), low tier before high.
std::string OcrReport(std::span<const OcrBenchResult> results, ReportFormat format);
std::string ComparisonReport(std::span<const TierComparison> comparisons,
                             ReportFormat format);
std::string PsnrReport(const superres::SrScore& score, metrics::PsnrMode mode,
                       ReportFormat format);

// A MACHINE report read back, e.g. to render it as markdown.
struct LoadedReport {
  std::string kind;  // detection, ocr, comparison, psnr
  std::vector<DetectionRow> detection;
  std::vector<OcrBenchResult> ocr;
  std::vector<TierComparison> comparison;
  superres::SrScore psnr;
  metrics::PsnrMode psnr_mode = metrics::PsnrMode::kRgb;
};

LoadedReport ParseMachineReport(std::istream& in, const std::string& source);
LoadedReport LoadMachineReport(const std::filesystem::path& path);
std::string RenderReport(const LoadedReport& report, ReportFormat format);

}  // namespace newsocr::bench

#endif  // NEWSOCR_REPORT_H_
