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

#include "nlu/report.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "nlu/error.h"
#include "nlu/schema.h"

namespace nlu {
namespace {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  // An empty row prints as a rule.
  std::vector<Row> rows;
};

std::string FormatF1(double f1) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", f1);
  return buf;
}

std::string Render(const Table& table) {
  std::vector<size_t> width(table.header.size(), 0);
  auto measure = [&](const Row& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  };
  measure(table.header);
  for (const Row& row : table.rows) measure(row);

  std::string out;
  auto line = [&](const Row& row) {
    std::string text;
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) text += " | ";
      text += row[c];
      if (c + 1 < row.size()) text.append(width[c] - row[c].size(), ' ');
    }
    out += text + "\n";
  };
  auto rule = [&] {
    for (size_t c = 0; c < width.size(); ++c) {
      if (c > 0) out += "-+-";
      out.append(width[c], '-');
    }
    out += "\n";
  };
  line(table.header);
  rule();
  for (const Row& row : table.rows) {
    if (row.empty()) {
      rule();
    } else {
      line(row);
    }
  }
  return out;
}

struct Scenario {
  const char* name;
  std::vector<Intent> intents;
};

const std::vector<Scenario>& Scenarios() {
  static const std::vector<Scenario> kScenarios = {
      {"Finishing the Trip Use-cases",
       {Intent::kStop, Intent::kPark, Intent::kPullOver, Intent::kDropOff}},
      {"Set/Change Destination/Route",
       {Intent::kSetChangeDest, Intent::kSetChangeRoute}},
      {"Set/Change Driving Behavior/Speed",
       {Intent::kGoFaster, Intent::kGoSlower}},
      {"Others (Door, Music, A/C, etc.)", {Intent::kOpenDoor, Intent::kOther}},
  };
  return kScenarios;
}

// Model table group of a spec; rules separate different groups.
int Group(ModelSpec spec) {
  switch (spec) {
    case ModelSpec::kHybrid1:
    case ModelSpec::kHybrid2:
      return 0;
    case ModelSpec::kSeparate1:
    case ModelSpec::kSeparate2:
      return 1;
    case ModelSpec::kJoint:
      return 2;
    case ModelSpec::kHierSeparate1:
    case ModelSpec::kHierSeparate2:
      return 3;
    default:
      return 4;
  }
}

ModelSpec IntentSpecOf(const CvReport& report) {
  ModelSpec spec = ParseSpec(report.task);
  if (IsTaggerSpec(spec)) {
    throw ConfigError("report task " + report.task +
                      " is not an intent recognizer");
  }
  return spec;
}

const ClassMetrics& Find(const Scores& scores, const std::string& label) {
  for (const ClassMetrics& c : scores.classes) {
    if (c.label == label) return c;
  }
  throw ConfigError("report has no row for " + label);
}

}  // namespace

const char* StyleName(ReportStyle style) {
  switch (style) {
    case ReportStyle::kSlotTable:
      return "slot_table";
    case ReportStyle::kKeywordTable:
      return "keyword_table";
    case ReportStyle::kIntentModelTable:
      return "intent_model_table";
    case ReportStyle::kIntentWiseTable:
      return "intent_wise_table";
  }
  return "";
}

ReportStyle ParseReportStyle(const std::string& name) {
  for (ReportStyle s :
       {ReportStyle::kSlotTable, ReportStyle::kKeywordTable,
        ReportStyle::kIntentModelTable, ReportStyle::kIntentWiseTable}) {
    if (name == StyleName(s)) return s;
  }
  throw ConfigError("unknown report style: " + name);
}

ReportStyle DefaultStyle(ModelSpec spec) {
  if (spec == ModelSpec::kSlotTagger) return ReportStyle::kSlotTable;
  if (spec == ModelSpec::kKeywordTagger) return ReportStyle::kKeywordTable;
  return ReportStyle::kIntentWiseTable;
}

std::string DisplayLabel(const std::string& label) {
  static const std::map<std::string, std::string> kDisplay = {
      {"TimeGuidance", "Time Guidance"},
      {"NonIntent", "Non-Intent"},
      {"SetChangeDest", "Set/ChangeDest"},
      {"SetChangeRoute", "Set/ChangeRoute"},
  };
  auto it = kDisplay.find(label);
  return it == kDisplay.end() ? label : it->second;
}

std::string ModelDisplayName(ModelSpec spec) {
  switch (spec) {
    case ModelSpec::kHybrid1:
      return "Hybrid-1: RNN + Rule-based (intent keywords)";
    case ModelSpec::kHybrid2:
      return "Hybrid-2: RNN + Rule-based (intent keywords & slots)";
    case ModelSpec::kSeparate1:
      return "Separate-1: Seq2one Bi-LSTM";
    case ModelSpec::kSeparate2:
      return "Separate-2: Seq2one Bi-LSTM + Attention (withContext)";
    case ModelSpec::kJoint:
      return "Joint: Seq2seq Bi-LSTM (intent keywords & slots & "
             "utterance-level intent types)";
    case ModelSpec::kHierSeparate1:
      return "Hierarchical & Separate-1";
    case ModelSpec::kHierSeparate2:
      return "Hierarchical & Separate-2 (Separate-1 + Attention)";
    case ModelSpec::kHierJoint:
      return "Hierarchical & Joint";
    case ModelSpec::kSlotTagger:
      return "Slot Tagger";
    case ModelSpec::kKeywordTagger:
      return "Intent Keyword Tagger";
  }
  return "";
}

std::string RenderReport(const CvReport& report, ReportStyle style) {
  Table table;
  switch (style) {
    case ReportStyle::kSlotTable:
    case ReportStyle::kKeywordTable: {
      const ModelSpec want = style == ReportStyle::kSlotTable
                                 ? ModelSpec::kSlotTagger
                                 : ModelSpec::kKeywordTagger;
      if (report.task != SpecName(want)) {
        throw ConfigError(std::string(StyleName(style)) + " needs a " +
                          SpecName(want) + " report, got " + report.task);
      }
      table.header = {
          style == ReportStyle::kSlotTable ? "Slot Type" : "Keyword Type",
          "F1"};
      for (const std::string& label : SpecLabels(want)) {
        table.rows.push_back(
            {DisplayLabel(label), FormatF1(Find(report.scores, label).f1)});
      }
      table.rows.push_back({});
      table.rows.push_back({"AVERAGE", FormatF1(report.scores.weighted_f1)});
      break;
    }
    case ReportStyle::kIntentModelTable:
      return RenderModelTable(std::span<const CvReport>(&report, 1));
    case ReportStyle::kIntentWiseTable: {
      IntentSpecOf(report);
      table.header = {"AMIE Scenario", "Intent Type", "F1"};
      for (const Scenario& s : Scenarios()) {
        for (size_t i = 0; i < s.intents.size(); ++i) {
          const std::string label(Name(s.intents[i]));
          table.rows.push_back({i == 0 ? s.name : "", DisplayLabel(label),
                                FormatF1(Find(report.scores, label).f1)});
        }
        table.rows.push_back({});
      }
      table.rows.push_back(
          {"", "AVERAGE", FormatF1(report.scores.weighted_f1)});
      break;
    }
  }
  return Render(table);
}

std::string RenderModelTable(std::span<const CvReport> reports) {
  Table table;
  table.header = {"Utterance-level Intent Detection Models", "F1"};
  int last_group = -1;
  for (const CvReport& r : reports) {
    const ModelSpec spec = IntentSpecOf(r);
    if (last_group >= 0 && Group(spec) != last_group) table.rows.push_back({});
    last_group = Group(spec);
    table.rows.push_back(
        {ModelDisplayName(spec), FormatF1(r.scores.weighted_f1)});
  }
  return Render(table);
}

}  // namespace nlu
