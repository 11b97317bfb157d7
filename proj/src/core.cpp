#include "ecorank/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ecorank {

Side opposite(Side side) noexcept { return side == Side::countries ? Side::products : Side::countries; }

const char* to_string(Side side) noexcept { return side == Side::countries ? "countries" : "products"; }

const char* to_string(Direction direction) noexcept {
  return direction == Direction::high_is_good ? "high" : "low";
}

Side parse_side(const std::string& text) {
  if (text == "countries" || text == "country") return Side::countries;
  if (text == "products" || text == "product") return Side::products;
  throw InvalidArgument("unknown side '" + text + "'");
}

Direction parse_direction(const std::string& text) {
  if (text == "high") return Direction::high_is_good;
  if (text == "low") return Direction::low_is_good;
  throw InvalidArgument("unknown direction '" + text + "'");
}

namespace {

void check_unique(const std::vector<std::string>& labels, const char* side) {
  std::unordered_set<std::string> seen;
  seen.reserve(labels.size());
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw InvalidArgument(std::string("duplicate ") + side + " label '" + label + "'");
    }
  }
}

}  // namespace

BipartiteMatrix::BipartiteMatrix(std::vector<std::string> country_labels, std::vector<std::string> product_labels,
                                 IncidenceMatrix entries, std::optional<int> year)
    : country_labels_(std::move(country_labels)),
      product_labels_(std::move(product_labels)),
      entries_(std::move(entries)),
      year_(year) {
  if (country_labels_.empty() || product_labels_.empty()) {
    throw InvalidArgument("bipartite matrix needs at least one country and one product");
  }
  if (entries_.rows() != static_cast<Index>(country_labels_.size()) ||
      entries_.cols() != static_cast<Index>(product_labels_.size())) {
    throw InvalidArgument("incidence shape does not match label counts");
  }
  if ((entries_.array() > 1).any()) {
    throw InvalidArgument("incidence entries must be 0 or 1");
  }
  check_unique(country_labels_, "country");
  check_unique(product_labels_, "product");

  diversification_ = entries_.cast<int>().rowwise().sum();
  ubiquity_ = entries_.cast<int>().colwise().sum().transpose();
  links_ = diversification_.sum();

  country_support_.resize(country_labels_.size());
  product_support_.resize(product_labels_.size());
  for (Index i = 0; i < countries(); ++i) country_support_[i].reserve(diversification_[i]);
  for (Index a = 0; a < products(); ++a) product_support_[a].reserve(ubiquity_[a]);
  for (Index a = 0; a < products(); ++a) {
    for (Index i = 0; i < countries(); ++i) {
      if (entries_(i, a) != 0) {
        country_support_[i].push_back(a);
        product_support_[a].push_back(i);
      }
    }
  }
}

BipartiteMatrix BipartiteMatrix::from_edges(std::vector<std::string> country_labels,
                                            std::vector<std::string> product_labels,
                                            const std::vector<std::pair<Index, Index>>& edges,
                                            std::optional<int> year) {
  IncidenceMatrix entries = IncidenceMatrix::Zero(static_cast<Index>(country_labels.size()),
                                                  static_cast<Index>(product_labels.size()));
  for (const auto& [i, a] : edges) {
    if (i < 0 || i >= entries.rows() || a < 0 || a >= entries.cols()) {
      throw InvalidArgument("edge index out of range");
    }
    entries(i, a) = 1;
  }
  return BipartiteMatrix(std::move(country_labels), std::move(product_labels), std::move(entries), year);
}

BipartiteMatrix BipartiteMatrix::select(const std::vector<Index>& rows, const std::vector<Index>& cols) const {
  std::vector<std::string> countries;
  std::vector<std::string> products;
  countries.reserve(rows.size());
  products.reserve(cols.size());
  for (Index i : rows) countries.push_back(country_labels_.at(i));
  for (Index a : cols) products.push_back(product_labels_.at(a));
  IncidenceMatrix sub = entries_(rows, cols);
  return BipartiteMatrix(std::move(countries), std::move(products), std::move(sub), year_);
}

std::optional<Index> BipartiteMatrix::find(Side side, const std::string& label) const {
  const auto& list = labels(side);
  auto it = std::find(list.begin(), list.end(), label);
  if (it == list.end()) return std::nullopt;
  return static_cast<Index>(it - list.begin());
}

bool operator==(const BipartiteMatrix& a, const BipartiteMatrix& b) {
  return a.year_ == b.year_ && a.country_labels_ == b.country_labels_ && a.product_labels_ == b.product_labels_ &&
         a.entries_ == b.entries_;
}

void validate(const MethodConfig& config) {
  if (const auto* mr = std::get_if<MrParams>(&config.method)) {
    if (mr->order < 0) throw InvalidArgument("MR order must be non-negative");
    if (mr->order % 2 != 0) throw InvalidArgument("MR order must be even, got " + std::to_string(mr->order));
    if (mr->order > mr->order_limit) {
      throw InvalidArgument("MR order " + std::to_string(mr->order) + " exceeds limit " +
                            std::to_string(mr->order_limit));
    }
  } else {
    const auto& fcm = std::get<FcmParams>(config.method);
    if (!(fcm.gamma > 0.0) || !std::isfinite(fcm.gamma)) throw NonPositiveGamma(fcm.gamma);
    if (fcm.iterations < 1) throw InvalidArgument("FCM needs at least one iteration");
    if (fcm.tolerance && !(*fcm.tolerance > 0.0)) throw InvalidArgument("FCM tolerance must be positive");
  }
  if (!(config.rca_threshold > 0.0)) throw InvalidArgument("RCA threshold must be positive");
}

std::string describe(const MethodConfig& config) {
  std::ostringstream out;
  if (const auto* mr = std::get_if<MrParams>(&config.method)) {
    out << "mr order=" << mr->order;
  } else {
    const auto& fcm = std::get<FcmParams>(config.method);
    out << "fcm gamma=" << format_double(fcm.gamma) << " iters=" << fcm.iterations;
    if (fcm.tolerance) out << " tol=" << format_double(*fcm.tolerance);
  }
  return out.str();
}

std::string file_tag(const MethodConfig& config) {
  std::string tag = describe(config);
  std::replace(tag.begin(), tag.end(), ' ', '_');
  tag.erase(std::remove(tag.begin(), tag.end(), '='), tag.end());
  return tag;
}

std::pair<Eigen::VectorXi, Eigen::VectorXi> degrees(const BipartiteMatrix& m) {
  return {m.diversification(), m.ubiquity()};
}

IsolationResult drop_isolated(const BipartiteMatrix& m) {
  // A zero-degree node carries no links, so removing it never changes
  // another node's degree: one pass already reaches the fixpoint.
  const auto keep_row = (m.diversification().array() > 0).eval();
  const auto keep_col = (m.ubiquity().array() > 0).eval();

  std::vector<Index> rows;
  std::vector<Index> cols;
  std::vector<std::string> removed_countries;
  std::vector<std::string> removed_products;
  for (Index i = 0; i < m.countries(); ++i) {
    if (keep_row[i]) {
      rows.push_back(i);
    } else {
      removed_countries.push_back(m.country_labels()[i]);
    }
  }
  for (Index a = 0; a < m.products(); ++a) {
    if (keep_col[a]) {
      cols.push_back(a);
    } else {
      removed_products.push_back(m.product_labels()[a]);
    }
  }
  if (rows.empty() || cols.empty()) throw EmptyNetwork();
  if (removed_countries.empty() && removed_products.empty()) return {m, {}, {}};
  return {m.select(rows, cols), std::move(removed_countries), std::move(removed_products)};
}

bool is_connected(const BipartiteMatrix& m) {
  // Node ids: countries 0..N-1, products N..N+M-1.
  const Index n = m.countries();
  const Index total = n + m.products();
  std::vector<char> seen(total, 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index visited = 1;
  while (!stack.empty()) {
    const Index node = stack.back();
    stack.pop_back();
    const auto& next = node < n ? m.exports_of(node) : m.exporters_of(node - n);
    const Index offset = node < n ? n : 0;
    for (Index other : next) {
      if (!seen[other + offset]) {
        seen[other + offset] = 1;
        ++visited;
        stack.push_back(other + offset);
      }
    }
  }
  return visited == total;
}

namespace {

std::vector<Index> permutation_for(const BipartiteMatrix& m, const Ranking& ranking, Side side) {
  const auto& labels = m.labels(side);
  if (ranking.side != side) {
    throw LabelMismatch(std::string("expected a ranking of ") + to_string(side));
  }
  if (ranking.ordered_ids.size() != labels.size()) {
    throw LabelMismatch(std::string("ranking size differs from number of ") + to_string(side));
  }
  std::unordered_map<std::string, Index> index_of;
  index_of.reserve(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) index_of.emplace(labels[k], static_cast<Index>(k));
  std::vector<Index> perm;
  std::vector<char> used(labels.size(), 0);
  perm.reserve(labels.size());
  for (const auto& id : ranking.ordered_ids) {
    auto it = index_of.find(id);
    if (it == index_of.end() || used[it->second]) {
      throw LabelMismatch("ranking label '" + id + "' does not match the matrix");
    }
    used[it->second] = 1;
    perm.push_back(it->second);
  }
  return perm;
}

}  // namespace

BipartiteMatrix sort_matrix(const BipartiteMatrix& m, const Ranking& countries, const Ranking& products) {
  return m.select(permutation_for(m, countries, Side::countries), permutation_for(m, products, Side::products));
}

Ranking ranking_from_scores(const ScoreVector& scores, Direction direction) {
  const Index n = scores.size();
  if (static_cast<Index>(scores.labels.size()) != n) {
    throw InvalidArgument("score vector has mismatched label count");
  }
  if (!scores.values.allFinite()) throw InvalidArgument("scores must be finite");

  Ranking ranking;
  ranking.side = scores.side;
  ranking.direction = direction;
  ranking.source_scores = scores;
  ranking.order.resize(n);
  std::iota(ranking.order.begin(), ranking.order.end(), Index{0});

  const auto& v = scores.values;
  const auto& labels = scores.labels;
  std::sort(ranking.order.begin(), ranking.order.end(), [&](Index a, Index b) {
    if (v[a] != v[b]) return direction == Direction::high_is_good ? v[a] > v[b] : v[a] < v[b];
    return labels[a] < labels[b];
  });

  ranking.ordered_ids.reserve(n);
  for (Index k : ranking.order) ranking.ordered_ids.push_back(labels[k]);

  Index begin = 0;
  for (Index pos = 1; pos <= n; ++pos) {
    if (pos == n || v[ranking.order[pos]] != v[ranking.order[begin]]) {
      ranking.tie_groups.emplace_back(begin, pos);
      begin = pos;
    }
  }
  return ranking;
}

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw Error("cannot format floating point value");
  return std::string(buffer, end);
}

}  // namespace ecorank
