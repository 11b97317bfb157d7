#include "ecorank/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace ecorank {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

struct Field {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Field> split(const std::string& line, char delimiter) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(delimiter, start);
    fields.push_back({line.substr(start, end == std::string::npos ? std::string::npos : end - start), start + 1});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

TradeRecord parse_line(const std::string& line, std::size_t line_no, const ParseOptions& options) {
  const auto fields = split(line, options.delimiter);
  if (fields.size() != 4) {
    throw ParseError(line_no, 1, "expected 4 fields, found " + std::to_string(fields.size()));
  }
  TradeRecord record;
  record.exporter = fields[0].text;
  record.product = fields[1].text;
  if (record.exporter.empty()) throw ParseError(line_no, fields[0].column, "empty exporter");
  if (record.product.empty()) throw ParseError(line_no, fields[1].column, "empty product");

  const auto& year = fields[2];
  const auto [year_end, year_ec] = std::from_chars(year.text.data(), year.text.data() + year.text.size(), record.year);
  if (year_ec != std::errc{} || year_end != year.text.data() + year.text.size()) {
    throw ParseError(line_no, year.column, "invalid year '" + year.text + "'");
  }
  if ((options.min_year && record.year < *options.min_year) || (options.max_year && record.year > *options.max_year)) {
    throw ParseError(line_no, year.column, "year " + year.text + " outside the configured range");
  }

  const auto& value = fields[3];
  const auto [value_end, value_ec] =
      std::from_chars(value.text.data(), value.text.data() + value.text.size(), record.value);
  if (value_ec != std::errc{} || value_end != value.text.data() + value.text.size() || !std::isfinite(record.value)) {
    throw ParseError(line_no, value.column, "invalid value '" + value.text + "'");
  }
  if (record.value < 0.0) {
    throw NegativeValue("line " + std::to_string(line_no) + ", column " + std::to_string(value.column) +
                        ": negative export value " + value.text);
  }
  return record;
}

}  // namespace

ParsedTrade parse_trade_records(std::istream& in, const ParseOptions& options) {
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, double> totals;
  ParsedTrade parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    try {
      auto record = parse_line(line, line_no, options);
      totals[{std::move(record.exporter), std::move(record.product), record.year}] += record.value;
    } catch (const ParseError& e) {
      if (options.strict) throw;
      parsed.diagnostics.push_back({e.line(), e.column(), e.what()});
    } catch (const NegativeValue& e) {
      if (options.strict) throw;
      parsed.diagnostics.push_back({line_no, 0, e.what()});
    }
  }
  parsed.records.reserve(totals.size());
  for (auto& [key, value] : totals) {
    parsed.records.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), value});
  }
  return parsed;
}

ParsedTrade load_trade_records(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return parse_trade_records(in, options);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.what());
  }
}

CleaningConfig parse_cleaning_config(std::istream& in) {
  CleaningConfig config;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    if (entry.front() == '[') {
      if (entry.back() != ']') throw ParseError(line_no, 1, "unterminated section header");
      section = entry.substr(1, entry.size() - 2);
      if (section != "aggregate_products" && section != "countries" && section != "core_countries" &&
          section != "cutoff_year") {
        throw ParseError(line_no, 2, "unknown section '" + section + "'");
      }
      continue;
    }
    if (section.empty()) throw ParseError(line_no, 1, "entry outside of any section");
    if (section == "aggregate_products") {
      config.aggregate_products.insert(entry);
    } else if (section == "countries") {
      config.countries.push_back(entry);
    } else if (section == "core_countries") {
      config.core_countries.push_back(entry);
    } else {
      int year = 0;
      const auto [end, ec] = std::from_chars(entry.data(), entry.data() + entry.size(), year);
      if (ec != std::errc{} || end != entry.data() + entry.size()) {
        throw ParseError(line_no, 1, "invalid cutoff year '" + entry + "'");
      }
      if (config.cutoff_year) throw ParseError(line_no, 1, "cutoff year given twice");
      config.cutoff_year = year;
    }
  }
  return config;
}

CleaningConfig load_cleaning_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_cleaning_config(in);
}

namespace {

/// Products with a zero-total year whose previous and following years
/// both have nonzero totals. Only years present in the data are considered.
std::set<std::string> gap_products(const std::vector<TradeRecord>& records) {
  std::set<int> years;
  std::map<std::string, std::map<int, double>> totals;
  for (const auto& r : records) {
    years.insert(r.year);
    totals[r.product][r.year] += r.value;
  }
  std::set<std::string> out;
  for (const auto& [product, by_year] : totals) {
    const auto total_in = [&](int year) {
      auto it = by_year.find(year);
      return it == by_year.end() ? 0.0 : it->second;
    };
    for (int year : years) {
      if (!years.count(year - 1) || !years.count(year + 1)) continue;
      if (total_in(year) == 0.0 && total_in(year - 1) > 0.0 && total_in(year + 1) > 0.0) {
        out.insert(product);
        break;
      }
    }
  }
  return out;
}

/// Labels whose last year with a nonzero value is <= cutoff (or never).
template <typename Key>
std::set<std::string> inactive(const std::vector<TradeRecord>& records, int cutoff, Key key) {
  std::map<std::string, std::optional<int>> last_active;
  for (const auto& r : records) {
    auto& last = last_active[key(r)];
    if (r.value > 0.0 && (!last || r.year > *last)) last = r.year;
  }
  std::set<std::string> out;
  for (const auto& [label, last] : last_active) {
    if (!last || *last <= cutoff) out.insert(label);
  }
  return out;
}

}  // namespace

CleanedTrade clean_dataset(const std::vector<TradeRecord>& records, const CleaningConfig& config) {
  CleanedTrade result;
  auto& report = result.report;
  report.input_records = records.size();

  const std::unordered_set<std::string> whitelist(config.countries.begin(), config.countries.end());
  std::vector<TradeRecord> current;
  current.reserve(records.size());
  for (const auto& r : records) {
    if (config.aggregate_products.count(r.product)) {
      report.aggregate_products.insert(r.product);
      continue;
    }
    if (!whitelist.empty() && !whitelist.count(r.exporter)) {
      report.non_whitelisted_countries.insert(r.exporter);
      continue;
    }
    current.push_back(r);
  }

  // Removing products changes country activity and vice versa.
  while (true) {
    ++report.passes;
    const auto gaps = gap_products(current);
    std::set<std::string> dead_countries;
    std::set<std::string> dead_products;
    if (config.cutoff_year) {
      dead_countries = inactive(current, *config.cutoff_year, [](const TradeRecord& r) { return r.exporter; });
      dead_products = inactive(current, *config.cutoff_year, [](const TradeRecord& r) { return r.product; });
    }
    if (gaps.empty() && dead_countries.empty() && dead_products.empty()) break;
    report.gap_products.insert(gaps.begin(), gaps.end());
    report.inactive_countries.insert(dead_countries.begin(), dead_countries.end());
    report.inactive_products.insert(dead_products.begin(), dead_products.end());
    std::erase_if(current, [&](const TradeRecord& r) {
      return gaps.count(r.product) || dead_products.count(r.product) || dead_countries.count(r.exporter);
    });
  }
  report.output_records = current.size();
  result.records = std::move(current);
  return result;
}

std::vector<TradeRecord> restrict_countries(const std::vector<TradeRecord>& records,
                                            const std::vector<std::string>& core) {
  if (core.empty()) throw InvalidArgument("core country list is empty");
  const std::unordered_set<std::string> keep(core.begin(), core.end());
  std::vector<TradeRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const TradeRecord& r) { return keep.count(r.exporter) > 0; });
  return out;
}

RcaMatrix compute_rca(const std::vector<TradeRecord>& records, int year, const std::vector<std::string>& countries,
                      const std::vector<std::string>& products) {
  if (countries.empty() || products.empty()) throw InvalidArgument("RCA needs non-empty country and product lists");
  std::unordered_map<std::string, Index> country_index;
  std::unordered_map<std::string, Index> product_index;
  for (std::size_t k = 0; k < countries.size(); ++k) country_index.emplace(countries[k], static_cast<Index>(k));
  for (std::size_t k = 0; k < products.size(); ++k) product_index.emplace(products[k], static_cast<Index>(k));

  Eigen::MatrixXd volume = Eigen::MatrixXd::Zero(static_cast<Index>(countries.size()),
                                                 static_cast<Index>(products.size()));
  for (const auto& r : records) {
    if (r.year != year) continue;
    const auto c = country_index.find(r.exporter);
    const auto p = product_index.find(r.product);
    if (c == country_index.end() || p == product_index.end()) continue;
    volume(c->second, p->second) += r.value;
  }

  const Eigen::VectorXd country_total = volume.rowwise().sum();
  const Eigen::RowVectorXd product_total = volume.colwise().sum();
  const double world_total = volume.sum();
  if (!(world_total > 0.0)) throw EmptyYear("no trade recorded in year " + std::to_string(year));

  RcaMatrix rca;
  rca.country_labels = countries;
  rca.product_labels = products;
  rca.year = year;
  rca.values = Eigen::MatrixXd::Zero(volume.rows(), volume.cols());
  for (Index a = 0; a < volume.cols(); ++a) {
    if (product_total[a] == 0.0) continue;
    const double world_share = product_total[a] / world_total;
    for (Index i = 0; i < volume.rows(); ++i) {
      if (country_total[i] == 0.0) continue;
      rca.values(i, a) = (volume(i, a) / country_total[i]) / world_share;
    }
  }
  for (Index i = 0; i < volume.rows(); ++i) {
    if (country_total[i] == 0.0) rca.zero_export_countries.push_back(countries[i]);
  }
  for (Index a = 0; a < volume.cols(); ++a) {
    if (product_total[a] == 0.0) rca.zero_export_products.push_back(products[a]);
  }
  return rca;
}

RcaMatrix compute_rca(const std::vector<TradeRecord>& records, int year) {
  std::set<std::string> countries;
  std::set<std::string> products;
  for (const auto& r : records) {
    if (r.year != year) continue;
    countries.insert(r.exporter);
    products.insert(r.product);
  }
  if (countries.empty()) throw EmptyYear("no records for year " + std::to_string(year));
  return compute_rca(records, year, {countries.begin(), countries.end()}, {products.begin(), products.end()});
}

IsolationResult threshold_to_matrix(const RcaMatrix& rca, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("RCA threshold must be positive");
  IncidenceMatrix entries = (rca.values.array() >= threshold).cast<std::uint8_t>();
  return drop_isolated(BipartiteMatrix(rca.country_labels, rca.product_labels, std::move(entries), rca.year));
}

std::string format_cleaning_report(const CleaningReport& report) {
  std::ostringstream out;
  out << "#ecorank-cleaning-report v1\n";
  out << "input_records\t" << report.input_records << '\n';
  out << "output_records\t" << report.output_records << '\n';
  out << "passes\t" << report.passes << '\n';
  out << "removed_aggregate_products\t" << report.aggregate_products.size() << '\n';
  out << "removed_non_whitelisted_countries\t" << report.non_whitelisted_countries.size() << '\n';
  out << "removed_gap_products\t" << report.gap_products.size() << '\n';
  out << "removed_inactive_countries\t" << report.inactive_countries.size() << '\n';
  out << "removed_inactive_products\t" << report.inactive_products.size() << '\n';
  const auto list = [&](const char* name, const std::set<std::string>& labels) {
    if (labels.empty()) return;
    out << '[' << name << "]\n";
    for (const auto& label : labels) out << label << '\n';
  };
  list("aggregate_products", report.aggregate_products);
  list("non_whitelisted_countries", report.non_whitelisted_countries);
  list("gap_products", report.gap_products);
  list("inactive_countries", report.inactive_countries);
  list("inactive_products", report.inactive_products);
  return out.str();
}

}  // namespace ecorank
