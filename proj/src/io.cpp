#include "ecorank/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace ecorank {

namespace {

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

/// Parses `"<label>"` starting at `pos`; advances `pos` past the closing quote.
std::string parse_quoted(const std::string& line, std::size_t& pos, std::size_t line_no) {
  if (pos >= line.size() || line[pos] != '"') throw ParseError(line_no, pos + 1, "expected opening quote");
  const auto close = line.find('"', pos + 1);
  if (close == std::string::npos) throw ParseError(line_no, pos + 1, "unterminated label");
  std::string label = line.substr(pos + 1, close - pos - 1);
  pos = close + 1;
  return label;
}

/// Value of `key=` inside a header line, or empty.
std::string header_value(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  std::size_t pos = 0;
  while ((pos = line.find(needle, pos)) != std::string::npos) {
    if (pos == 0 || line[pos - 1] == ' ' || line[pos - 1] == '#') {
      const auto start = pos + needle.size();
      const auto end = line.find(' ', start);
      return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
    }
    pos += needle.size();
  }
  return {};
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string quote_label(const std::string& label) {
  if (label.find_first_of("\"\t\r\n") != std::string::npos) {
    throw InvalidArgument("label '" + label + "' contains a quote, tab or line break");
  }
  return "\"" + label + "\"";
}

void write_matrix(std::ostream& out, const BipartiteMatrix& m) {
  out << kMatrixMagic << " year=" << (m.year() ? std::to_string(*m.year()) : "none") << '\n';
  for (Index i = 0; i < m.countries(); ++i) {
    const std::string country = quote_label(m.country_labels()[i]);
    for (Index a : m.exports_of(i)) out << country << '\t' << quote_label(m.product_labels()[a]) << '\n';
  }
}

BipartiteMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, 1, "missing matrix header");
  ++line_no;
  strip_cr(line);
  if (line.rfind(kMatrixMagic, 0) != 0) throw ParseError(1, 1, "not an ecorank matrix file");
  std::optional<int> year;
  const std::string year_text = header_value(line, "year");
  if (year_text.empty()) throw ParseError(1, 1, "header lacks year=<int|none>");
  if (year_text != "none") {
    int value = 0;
    const auto [end, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), value);
    if (ec != std::errc{} || end != year_text.data() + year_text.size()) {
      throw ParseError(1, line.find("year=") + 6, "invalid year '" + year_text + "'");
    }
    year = value;
  }

  std::vector<std::string> countries;
  std::vector<std::string> products;
  std::unordered_map<std::string, Index> country_index;
  std::unordered_map<std::string, Index> product_index;
  std::vector<std::pair<Index, Index>> edges;
  const auto intern = [](std::unordered_map<std::string, Index>& index, std::vector<std::string>& labels,
                         std::string label) {
    auto [it, inserted] = index.emplace(label, static_cast<Index>(labels.size()));
    if (inserted) labels.push_back(std::move(label));
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line) || line[0] == '#') continue;
    std::size_t pos = 0;
    std::string country = parse_quoted(line, pos, line_no);
    if (pos >= line.size() || line[pos] != '\t') throw ParseError(line_no, pos + 1, "expected tab");
    ++pos;
    std::string product = parse_quoted(line, pos, line_no);
    if (pos != line.size()) throw ParseError(line_no, pos + 1, "trailing characters");
    const Index i = intern(country_index, countries, std::move(country));
    const Index a = intern(product_index, products, std::move(product));
    edges.emplace_back(i, a);
  }
  if (countries.empty()) throw EmptyNetwork("matrix file contains no links");
  return BipartiteMatrix::from_edges(std::move(countries), std::move(products), edges, year);
}

void save_matrix(const std::filesystem::path& path, const BipartiteMatrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  write_text_file(path, out.str());
}

BipartiteMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.what());
  }
}

void write_pbm(std::ostream& out, const BipartiteMatrix& m) {
  out << "P1\n" << m.products() << ' ' << m.countries() << '\n';
  for (Index i = 0; i < m.countries(); ++i) {
    for (Index a = 0; a < m.products(); ++a) {
      if (a > 0) out << ' ';
      out << (m(i, a) ? '1' : '0');
    }
    out << '\n';
  }
}

void write_scores(std::ostream& out, const ScoreVector& scores, Direction direction) {
  if (static_cast<Index>(scores.labels.size()) != scores.size()) {
    throw InvalidArgument("score vector has mismatched label count");
  }
  out << kScoresMagic << '\n';
  out << "# side=" << to_string(scores.side) << " direction=" << to_string(direction) << '\n';
  out << "# method=" << scores.method_tag << '\n';
  for (Index k = 0; k < scores.size(); ++k) {
    out << quote_label(scores.labels[k]) << '\t' << format_double(scores.values[k]) << '\n';
  }
}

ScoreFile read_scores(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  ScoreFile file;
  bool have_magic = false;
  bool have_side = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    if (line[0] == '#') {
      if (line.rfind(kScoresMagic, 0) == 0) have_magic = true;
      if (const auto side = header_value(line, "side"); !side.empty()) {
        file.scores.side = parse_side(side);
        have_side = true;
      }
      if (const auto dir = header_value(line, "direction"); !dir.empty()) file.direction = parse_direction(dir);
      if (const auto pos = line.find("# method="); pos == 0) file.scores.method_tag = line.substr(9);
      continue;
    }
    if (!have_magic) throw ParseError(line_no, 1, "not an ecorank score file");
    std::size_t pos = 0;
    std::string label = parse_quoted(line, pos, line_no);
    if (pos >= line.size() || line[pos] != '\t') throw ParseError(line_no, pos + 1, "expected tab");
    ++pos;
    double value = 0.0;
    const char* begin = line.data() + pos;
    const char* end = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) throw ParseError(line_no, pos + 1, "invalid score");
    file.scores.labels.push_back(std::move(label));
    values.push_back(value);
  }
  if (!have_magic) throw ParseError(line_no + 1, 1, "not an ecorank score file");
  if (!have_side) throw ParseError(1, 1, "score file header lacks side=");
  file.scores.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
  return file;
}

void save_scores(const std::filesystem::path& path, const ScoreVector& scores, Direction direction) {
  std::ostringstream out;
  write_scores(out, scores, direction);
  write_text_file(path, out.str());
}

ScoreFile load_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_scores(in);
}

void write_ranking(std::ostream& out, const Ranking& ranking) {
  out << kRankingMagic << '\n';
  out << "# side=" << to_string(ranking.side) << " direction=" << to_string(ranking.direction) << '\n';
  out << "# method=" << ranking.source_scores.method_tag << '\n';
  std::size_t group = 0;
  for (const auto& [begin, end] : ranking.tie_groups) {
    ++group;
    for (Index pos = begin; pos < end; ++pos) {
      out << pos + 1 << '\t' << group << '\t' << quote_label(ranking.ordered_ids[pos]) << '\n';
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

}  // namespace ecorank
