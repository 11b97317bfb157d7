#pragma once

#include <span>
#include <string>

#include "ecorank/eval.hpp"

namespace ecorank {

/// Tab-separated table with '#' header lines for settings and notes.
/// Undefined statistics are written as "NA".
std::string format_report_table(const EvaluationReport& report);

/// Machine-readable key-value (JSON) form of a report.
std::string format_report_json(const EvaluationReport& report);

/// `<experiment>_<method>_<params>`; append ".report" for the table.
std::string report_file_stem(const EvaluationReport& report);

/// Long-format sweep table: method, parameter, value, statistic, result.
std::string format_sweep_table(std::span<const SweepRow> rows);

}  // namespace ecorank
