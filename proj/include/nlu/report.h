// Copyright 2026 The Cabin NLU Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLU_REPORT_H_
#define NLU_REPORT_H_

#include <span>
#include <string>

#include "nlu/bundle.h"
#include "nlu/cv.h"

namespace nlu {

enum class ReportStyle {
  kSlotTable,         // Slot Type | F1
  kKeywordTable,      // Keyword Type | F1
  kIntentModelTable,  // Utterance-level Intent Detection Models | F1
  kIntentWiseTable,   // AMIE Scenario | Intent Type | F1
};

const char* StyleName(ReportStyle style);
// Throws ConfigError for an unknown name.
ReportStyle ParseReportStyle(const std::string& name);
// The natural style for a spec: slot, keyword, or intent-wise tables.
ReportStyle DefaultStyle(ModelSpec spec);

// Printed form of a schema label ("TimeGuidance" -> "Time Guidance").
std::string DisplayLabel(const std::string& label);
// Row label of a spec in the model comparison table.
std::string ModelDisplayName(ModelSpec spec);

// Fixed-width text table. The last row is the support-weighted AVERAGE.
// Throws ConfigError when the report's task does not fit the style.
std::string RenderReport(const CvReport& report, ReportStyle style);
// Model comparison table with one row per report, in the given order.
std::string RenderModelTable(std::span<const CvReport> reports);

}  // namespace nlu

#endif  // NLU_REPORT_H_
