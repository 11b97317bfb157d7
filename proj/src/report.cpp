#include "ecorank/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ecorank {

namespace {

std::string cell(const std::optional<double>& value) { return value ? format_double(*value) : "NA"; }

}  // namespace

std::string format_report_table(const EvaluationReport& report) {
  std::ostringstream out;
  out << "# experiment=" << to_string(report.kind) << '\n';
  out << "# method=" << report.method_tag << '\n';
  for (const auto& [key, value] : report.settings) out << "# " << key << '=' << value << '\n';
  for (const auto& note : report.notes) out << "# note: " << note << '\n';

  bool first = true;
  const auto column = [&](const std::string& name) {
    if (!first) out << '\t';
    out << name;
    first = false;
  };
  for (const auto& name : report.parameter_columns) column(name);
  for (const auto& name : report.statistic_columns) column(name);
  out << '\n';
  for (const auto& row : report.rows) {
    first = true;
    for (const auto& p : row.parameters) column(p);
    for (const auto& s : row.statistics) column(cell(s));
    out << '\n';
  }
  return out.str();
}

std::string format_report_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["experiment"] = to_string(report.kind);
  doc["method"] = report.method_tag;
  doc["settings"] = report.settings;
  doc["notes"] = report.notes;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    for (std::size_t k = 0; k < report.parameter_columns.size(); ++k) {
      entry[report.parameter_columns[k]] = row.parameters.at(k);
    }
    for (std::size_t k = 0; k < report.statistic_columns.size(); ++k) {
      const auto& value = row.statistics.at(k);
      entry[report.statistic_columns[k]] = value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
    }
    rows.push_back(std::move(entry));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string report_file_stem(const EvaluationReport& report) {
  std::string tag = report.method_tag;
  std::replace(tag.begin(), tag.end(), ' ', '_');
  tag.erase(std::remove(tag.begin(), tag.end(), '='), tag.end());
  return std::string(to_string(report.kind)) + "_" + tag;
}

std::string format_sweep_table(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "method\tparameter\tvalue\tstatistic\tresult\n";
  for (const auto& row : rows) {
    out << row.method << '\t' << row.parameter << '\t' << format_double(row.parameter_value) << '\t' << row.statistic
        << '\t' << cell(row.value) << '\n';
  }
  return out.str();
}

}  // namespace ecorank
