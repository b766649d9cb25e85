// Copyright 2026 The ringcv Authors
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

#pragma once

// Report files. Every command writes a JSON summary (ordered keys, so the
// byte stream is deterministic for a given run) and, when it produces
// tabular data, one CSV per table. Floats in CSV are rendered with %.12g;
// the JSON writer uses shortest-round-trip formatting.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ringcv/core.hpp"

namespace ringcv {

/// One CSV table: name (file suffix), header, numeric rows.
struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// A full report: summary JSON plus any tables, written under a common
/// file stem.
struct ReportBundle {
  std::string stem;
  nlohmann::ordered_json summary;
  std::vector<CsvTable> tables;
};

/// %.12g rendering used for all CSV numbers.
inline std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline std::string csv_text(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw Error("CSV row width does not match the header of " + table.name);
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

/// UTC timestamp, ISO 8601.
inline std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

/// Write `<stem>_summary.json` and `<stem>_<table>.csv` under `directory`
/// (created if needed). With `with_timestamp` the summary gains a
/// "timestamp" key; suppress it for byte-identical reruns. Returns the
/// summary path.
inline std::string write_report(const ReportBundle& bundle,
                                const std::string& directory,
                                bool with_timestamp) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);

  nlohmann::ordered_json summary = bundle.summary;
  if (with_timestamp) summary["timestamp"] = utc_timestamp_now();

  const fs::path base = fs::path(directory) / bundle.stem;
  const std::string summary_path = base.string() + "_summary.json";
  {
    std::ofstream out(summary_path);
    if (!out) throw Error("cannot write " + summary_path);
    out << summary.dump(2) << '\n';
  }
  for (const auto& table : bundle.tables) {
    const std::string table_path = base.string() + "_" + table.name + ".csv";
    std::ofstream out(table_path);
    if (!out) throw Error("cannot write " + table_path);
    out << csv_text(table);
  }
  return summary_path;
}

}  // namespace ringcv
