#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecorank/core.hpp"

namespace ecorank {

/// One exporter/product/year observation, value in thousands of USD.
struct TradeRecord {
  std::string exporter;
  std::string product;
  int year = 0;
  double value = 0.0;

  friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

struct ParseOptions {
  char delimiter = '\t';
  /// Throw on the first malformed line instead of skipping it.
  bool strict = true;
  std::optional<int> min_year;
  std::optional<int> max_year;
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

struct ParsedTrade {
  /// Sorted by (exporter, product, year); duplicate triples summed.
  std::vector<TradeRecord> records;
  /// Malformed lines skipped in lenient mode.
  std::vector<ParseDiagnostic> diagnostics;
};

/// Reads `exporter<TAB>product<TAB>year<TAB>value` lines; '#' lines and
/// blank lines are skipped. Strict mode throws ParseError (or NegativeValue)
/// on the first bad line.
ParsedTrade parse_trade_records(std::istream& in, const ParseOptions& options = {});
ParsedTrade load_trade_records(const std::filesystem::path& path, const ParseOptions& options = {});

/// Cleaning rules applied before building a network.
///
/// Config file format, one entry per line, '#' comments:
///
///   [aggregate_products]   product labels treated as aggregates
///   [countries]            country whitelist (empty = keep all)
///   [core_countries]       restricted country list
///   [cutoff_year]          drop nodes with no nonzero entry after this year
struct CleaningConfig {
  std::set<std::string> aggregate_products;
  std::vector<std::string> countries;
  std::vector<std::string> core_countries;
  std::optional<int> cutoff_year;
};

CleaningConfig parse_cleaning_config(std::istream& in);
CleaningConfig load_cleaning_config(const std::filesystem::path& path);

struct CleaningReport {
  std::set<std::string> aggregate_products;
  std::set<std::string> non_whitelisted_countries;
  /// Products with a zero-total year between two nonzero-total years.
  std::set<std::string> gap_products;
  std::set<std::string> inactive_countries;
  std::set<std::string> inactive_products;
  std::size_t input_records = 0;
  std::size_t output_records = 0;
  int passes = 0;
};

struct CleanedTrade {
  std::vector<TradeRecord> records;
  CleaningReport report;
};

/// Drops aggregate categories, non-whitelisted exporters, products whose
/// yearly world total is zero in a year sandwiched between nonzero
/// neighbours, and countries/products with no nonzero entry after the
/// cutoff year. Rules are repeated until nothing changes, so the result is
/// a fixpoint.
CleanedTrade clean_dataset(const std::vector<TradeRecord>& records, const CleaningConfig& config);

/// Keeps only records whose exporter is in `core`. Throws InvalidArgument
/// on an empty list.
std::vector<TradeRecord> restrict_countries(const std::vector<TradeRecord>& records,
                                            const std::vector<std::string>& core);

/// Revealed comparative advantage for one year.
struct RcaMatrix {
  std::vector<std::string> country_labels;
  std::vector<std::string> product_labels;
  Eigen::MatrixXd values;
  int year = 0;
  /// Countries with zero total exports; their rows are all zero.
  std::vector<std::string> zero_export_countries;
  /// Products with zero world exports; their columns are all zero.
  std::vector<std::string> zero_export_products;
};

/// RCA_ia = (e_ia / sum_b e_ib) / (sum_j e_ja / sum_jb e_jb) over the
/// records of `year` whose labels are in the given lists. Throws EmptyYear
/// if total trade is zero.
RcaMatrix compute_rca(const std::vector<TradeRecord>& records, int year, const std::vector<std::string>& countries,
                      const std::vector<std::string>& products);

/// Same, with label lists taken (sorted) from the year's records.
RcaMatrix compute_rca(const std::vector<TradeRecord>& records, int year);

/// Links where RCA >= threshold, then isolated nodes removed.
IsolationResult threshold_to_matrix(const RcaMatrix& rca, double threshold = 1.0);

/// Structured text summary of a cleaning run.
std::string format_cleaning_report(const CleaningReport& report);

}  // namespace ecorank
