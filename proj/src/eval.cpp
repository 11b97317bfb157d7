#include "ecorank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_map>

#include "ecorank/statistics.hpp"

namespace ecorank {

// ---------------------------------------------------------------------------
// Spearman on labelled score vectors

std::pair<Eigen::VectorXd, Eigen::VectorXd> align_on_shared_labels(const ScoreVector& x, const ScoreVector& y) {
  std::unordered_map<std::string, Index> y_index;
  y_index.reserve(y.labels.size());
  for (std::size_t k = 0; k < y.labels.size(); ++k) y_index.emplace(y.labels[k], static_cast<Index>(k));

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < x.labels.size(); ++k) {
    auto it = y_index.find(x.labels[k]);
    if (it == y_index.end()) continue;
    xs.push_back(x.values[static_cast<Index>(k)]);
    ys.push_back(y.values[it->second]);
  }
  return {Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Index>(xs.size())),
          Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Index>(ys.size()))};
}

double spearman(const ScoreVector& x, const ScoreVector& y) {
  if (x.side != y.side) throw LabelMismatch("spearman: score vectors belong to different sides");
  const auto [a, b] = align_on_shared_labels(x, y);
  if (a.size() != x.size() || a.size() != y.size()) {
    throw LabelMismatch("spearman: score vectors cover different labels");
  }
  return spearman(a, b);
}

double spearman_on_shared_labels(const ScoreVector& x, const ScoreVector& y) {
  const auto [a, b] = align_on_shared_labels(x, y);
  if (a.size() == 0) throw EmptyIntersection(std::string("no shared ") + to_string(x.side));
  return spearman(a, b);
}

// ---------------------------------------------------------------------------
// Extinction

std::vector<double> ExtinctionCurve::values() const {
  std::vector<double> out;
  out.reserve(extinct.size());
  for (Index k = 0; k < removals(); ++k) out.push_back(value(k));
  return out;
}

ExtinctionCurve extinction_curve(const BipartiteMatrix& m, Side side, std::span<const Index> removal_order) {
  const Index n = m.size(side);
  if (static_cast<Index>(removal_order.size()) != n) {
    throw LabelMismatch("removal order must cover every node of the removed side");
  }
  std::vector<char> seen(n, 0);
  for (Index node : removal_order) {
    if (node < 0 || node >= n || seen[node]) throw LabelMismatch("removal order is not a permutation");
    seen[node] = 1;
  }

  const Side other = opposite(side);
  Eigen::VectorXi remaining = m.degrees(other);
  Index extinct = (remaining.array() == 0).count();

  ExtinctionCurve curve;
  curve.removed_side = side;
  curve.opposite_size = m.size(other);
  curve.extinct.reserve(n);
  const auto& adjacency = m.neighbors(side);
  for (Index node : removal_order) {
    for (Index neighbor : adjacency[node]) {
      if (--remaining[neighbor] == 0) ++extinct;
    }
    curve.extinct.push_back(extinct);
  }
  return curve;
}

namespace {

std::vector<Index> best_first_indices(const BipartiteMatrix& m, const Ranking& ranking) {
  const auto& labels = m.labels(ranking.side);
  if (ranking.ordered_ids.size() != labels.size()) {
    throw LabelMismatch(std::string("ranking does not cover the matrix ") + to_string(ranking.side));
  }
  std::unordered_map<std::string, Index> index_of;
  index_of.reserve(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) index_of.emplace(labels[k], static_cast<Index>(k));
  std::vector<Index> order;
  order.reserve(labels.size());
  for (const auto& id : ranking.ordered_ids) {
    auto it = index_of.find(id);
    if (it == index_of.end()) throw LabelMismatch("unknown label '" + id + "' in ranking");
    order.push_back(it->second);
  }
  return order;
}

}  // namespace

std::vector<Index> removal_order(const BipartiteMatrix& m, const Ranking& ranking) {
  auto order = best_first_indices(m, ranking);
  if (ranking.side == Side::products) std::reverse(order.begin(), order.end());
  return order;
}

ExtinctionCurve extinction_curve(const BipartiteMatrix& m, const Ranking& ranking) {
  const auto order = removal_order(m, ranking);
  return extinction_curve(m, ranking.side, order);
}

double extinction_area(const ExtinctionCurve& curve) {
  if (curve.removals() == 0 || curve.opposite_size == 0) throw InvalidArgument("empty extinction curve");
  // Sum of integer counts is exact; one division keeps the result
  // identical to any other exact evaluation of the same step function.
  Index total = 0;
  for (Index e : curve.extinct) total += e;
  return static_cast<double>(total) /
         (static_cast<double>(curve.removals()) * static_cast<double>(curve.opposite_size));
}

double extinction_area_tie_averaged(const BipartiteMatrix& m, const ScoreVector& scores, Direction direction,
                                    int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("tie averaging needs at least one trial");
  const Ranking ranking = ranking_from_scores(scores, direction);
  if (!ranking.has_ties()) return extinction_area(extinction_curve(m, ranking));

  // Tie groups refer to positions in the best-first list.
  const auto base = best_first_indices(m, ranking);

  std::mt19937_64 engine(seed);
  double sum = 0.0;
  std::vector<Index> order(base.size());
  for (int t = 0; t < trials; ++t) {
    order = base;
    for (const auto& [begin, end] : ranking.tie_groups) {
      if (end - begin > 1) std::shuffle(order.begin() + begin, order.begin() + end, engine);
    }
    if (ranking.side == Side::products) std::reverse(order.begin(), order.end());
    sum += extinction_area(extinction_curve(m, ranking.side, order));
  }
  return sum / trials;
}

// ---------------------------------------------------------------------------
// Noise

std::vector<Index> sample_flip_cells(Index rows, Index cols, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("noise fraction must lie in [0, 1]");
  const Index total = rows * cols;
  const auto count = static_cast<Index>(std::llround(eta * static_cast<double>(total)));
  std::vector<Index> cells(total);
  std::iota(cells.begin(), cells.end(), Index{0});
  std::mt19937_64 engine(seed);
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (Index k = 0; k < count; ++k) {
    std::uniform_int_distribution<Index> pick(k, total - 1);
    std::swap(cells[k], cells[pick(engine)]);
  }
  cells.resize(count);
  return cells;
}

BipartiteMatrix flip_cells(const BipartiteMatrix& m, std::span<const Index> cells) {
  IncidenceMatrix entries = m.entries();
  for (Index cell : cells) {
    if (cell < 0 || cell >= entries.size()) throw InvalidArgument("flip cell out of range");
    entries(cell) = static_cast<std::uint8_t>(1 - entries(cell));
  }
  return BipartiteMatrix(m.country_labels(), m.product_labels(), std::move(entries), m.year());
}

BipartiteMatrix flip_noise(const BipartiteMatrix& m, double eta, std::uint64_t seed) {
  const auto cells = sample_flip_cells(m.countries(), m.products(), eta, seed);
  return flip_cells(m, cells);
}

// ---------------------------------------------------------------------------
// Reports

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::extinction:
      return "extinction";
    case ExperimentKind::noise:
      return "noise";
    case ExperimentKind::volatility:
      return "volatility";
    case ExperimentKind::correlation:
      return "correlation";
  }
  return "unknown";
}

std::optional<double> EvaluationReport::find(const std::vector<std::string>& parameters,
                                             const std::string& statistic) const {
  const auto column = std::find(statistic_columns.begin(), statistic_columns.end(), statistic);
  if (column == statistic_columns.end()) return std::nullopt;
  const auto index = static_cast<std::size_t>(column - statistic_columns.begin());
  for (const auto& row : rows) {
    if (row.parameters == parameters) return row.statistics.at(index);
  }
  return std::nullopt;
}

namespace {

std::optional<double> guarded_spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  try {
    return spearman(x, y);
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

std::optional<double> guarded_shared_spearman(const ScoreVector& x, const ScoreVector& y) {
  try {
    return spearman_on_shared_labels(x, y);
  } catch (const DegenerateInput&) {
    return std::nullopt;
  }
}

/// Scores oriented so that larger always means better.
Eigen::VectorXd oriented(const Eigen::VectorXd& values, Direction direction) {
  return direction == Direction::high_is_good ? values : Eigen::VectorXd(-values);
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  int count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

void note_flags(EvaluationReport& report, const MethodScores& scores) {
  if (scores.underflow) {
    report.notes.push_back("underflow: some scores reached zero; zero-score tails are treated as ties");
  }
  if (scores.condensation_warning) {
    report.notes.push_back("condensation: gamma <= 0.6 lies in the condensed phase");
  }
}

struct ExtinctionAreas {
  double countries;
  double products;
};

ExtinctionAreas extinction_areas(const BipartiteMatrix& m, const MethodScores& scores, int trials,
                                 std::uint64_t seed) {
  return {extinction_area_tie_averaged(m, scores.countries, scores.country_direction, trials, seed),
          extinction_area_tie_averaged(m, scores.products, scores.product_direction, trials, seed)};
}

struct Correlations {
  std::optional<double> countries_diversification;
  std::optional<double> products_ubiquity;
  std::optional<double> products_least_fit;
};

Correlations correlations(const BipartiteMatrix& m, const MethodScores& scores, bool fcm) {
  const Eigen::VectorXd c = oriented(scores.countries.values, scores.country_direction);
  const Eigen::VectorXd p = oriented(scores.products.values, scores.product_direction);
  Correlations out;
  out.countries_diversification = guarded_spearman(c, m.diversification().cast<double>());
  // Products ranked by increasing ubiquity.
  out.products_ubiquity = guarded_spearman(p, Eigen::VectorXd(-m.ubiquity().cast<double>()));
  if (fcm) {
    out.products_least_fit = guarded_spearman(p, least_fit_exporter_score(m, scores.countries.values));
  }
  return out;
}

}  // namespace

EvaluationReport extinction_report(const BipartiteMatrix& m, const MethodConfig& config, int trials,
                                   std::uint64_t seed) {
  const MethodScores scores = score_network(m, config);
  const auto areas = extinction_areas(m, scores, trials, seed);
  EvaluationReport report;
  report.kind = ExperimentKind::extinction;
  report.method_tag = describe(config);
  report.settings = {{"trials", std::to_string(trials)}, {"seed", std::to_string(seed)}};
  report.statistic_columns = {"E_C", "E_P"};
  report.rows.push_back({{}, {areas.countries, areas.products}});
  note_flags(report, scores);
  return report;
}

EvaluationReport extinction_report(const BipartiteMatrix& m, const ScoreVector& scores, Direction direction,
                                   int trials, std::uint64_t seed) {
  EvaluationReport report;
  report.kind = ExperimentKind::extinction;
  report.method_tag = scores.method_tag;
  report.settings = {{"trials", std::to_string(trials)},
                     {"seed", std::to_string(seed)},
                     {"side", to_string(scores.side)},
                     {"direction", to_string(direction)}};
  report.statistic_columns = {scores.side == Side::countries ? "E_C" : "E_P"};
  report.rows.push_back({{}, {extinction_area_tie_averaged(m, scores, direction, trials, seed)}});
  return report;
}

EvaluationReport noise_robustness(const BipartiteMatrix& m, const MethodConfig& config, std::span<const double> etas,
                                  std::span<const std::uint64_t> seeds) {
  if (etas.empty() || seeds.empty()) throw InvalidArgument("noise experiment needs at least one eta and one seed");
  const MethodScores original = score_network(m, config);

  EvaluationReport report;
  report.kind = ExperimentKind::noise;
  report.method_tag = describe(config);
  report.settings = {{"seeds", std::to_string(seeds.size())}};
  report.parameter_columns = {"eta", "seed"};
  report.statistic_columns = {"rho_countries", "rho_products"};
  note_flags(report, original);

  bool degenerate = false;
  for (double eta : etas) {
    std::vector<std::optional<double>> rho_countries;
    std::vector<std::optional<double>> rho_products;
    for (std::uint64_t seed : seeds) {
      const auto perturbed = drop_isolated(flip_noise(m, eta, seed)).matrix;
      const MethodScores after = score_network(perturbed, config);
      rho_countries.push_back(guarded_shared_spearman(original.countries, after.countries));
      rho_products.push_back(guarded_shared_spearman(original.products, after.products));
      degenerate = degenerate || !rho_countries.back() || !rho_products.back();
      report.rows.push_back({{format_double(eta), std::to_string(seed)}, {rho_countries.back(), rho_products.back()}});
    }
    report.rows.push_back({{format_double(eta), "mean"}, {mean_of(rho_countries), mean_of(rho_products)}});
  }
  if (degenerate) report.notes.push_back("degenerate input: constant scores, correlation undefined for some seeds");
  return report;
}

EvaluationReport volatility(const BipartiteMatrix& first, const BipartiteMatrix& second, const MethodConfig& config) {
  const MethodScores a = score_network(first, config);
  const MethodScores b = score_network(second, config);

  EvaluationReport report;
  report.kind = ExperimentKind::volatility;
  report.method_tag = describe(config);
  const auto year_text = [](const BipartiteMatrix& m) { return m.year() ? std::to_string(*m.year()) : "none"; };
  report.settings = {{"year_a", year_text(first)}, {"year_b", year_text(second)}};
  report.statistic_columns = {"rho_countries", "rho_products", "shared_countries", "shared_products"};

  const auto shared_c = align_on_shared_labels(a.countries, b.countries).first.size();
  const auto shared_p = align_on_shared_labels(a.products, b.products).first.size();
  if (shared_c == 0 || shared_p == 0) throw EmptyIntersection("the two networks share no countries or no products");

  const auto rho_c = guarded_shared_spearman(a.countries, b.countries);
  const auto rho_p = guarded_shared_spearman(a.products, b.products);
  if (!rho_c || !rho_p) report.notes.push_back("degenerate input: constant scores on the shared labels");
  report.rows.push_back({{}, {rho_c, rho_p, static_cast<double>(shared_c), static_cast<double>(shared_p)}});
  note_flags(report, a);
  return report;
}

EvaluationReport correlation_report(const BipartiteMatrix& m, const MethodConfig& config) {
  const MethodScores scores = score_network(m, config);
  const auto rho = correlations(m, scores, config.is_fcm());
  EvaluationReport report;
  report.kind = ExperimentKind::correlation;
  report.method_tag = describe(config);
  report.statistic_columns = {"rho_countries_diversification", "rho_products_ubiquity"};
  ReportRow row{{}, {rho.countries_diversification, rho.products_ubiquity}};
  if (config.is_fcm()) {
    report.statistic_columns.push_back("rho_products_least_fit");
    row.statistics.push_back(rho.products_least_fit);
  }
  report.rows.push_back(std::move(row));
  note_flags(report, scores);
  return report;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<SweepRow> sweep(const BipartiteMatrix& m, std::span<const MethodConfig> grid,
                            const SweepOptions& options) {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  if (options.experiments.empty()) throw InvalidArgument("sweep needs at least one experiment");

  std::vector<SweepRow> rows;
  for (const auto& config : grid) {
    const bool fcm = config.is_fcm();
    const std::string method = fcm ? "fcm" : "mr";
    const std::string parameter = fcm ? "gamma" : "order";
    const double value = fcm ? std::get<FcmParams>(config.method).gamma
                             : static_cast<double>(std::get<MrParams>(config.method).order);
    const auto emit = [&](const std::string& statistic, std::optional<double> result) {
      rows.push_back({method, parameter, value, statistic, result});
    };

    const MethodScores scores = score_network(m, config);
    for (ExperimentKind kind : options.experiments) {
      switch (kind) {
        case ExperimentKind::extinction: {
          const auto areas = extinction_areas(m, scores, options.trials, options.seed);
          emit("E_C", areas.countries);
          emit("E_P", areas.products);
          break;
        }
        case ExperimentKind::correlation: {
          const auto rho = correlations(m, scores, fcm);
          emit("rho_countries_diversification", rho.countries_diversification);
          emit("rho_products_ubiquity", rho.products_ubiquity);
          if (fcm) emit("rho_products_least_fit", rho.products_least_fit);
          break;
        }
        case ExperimentKind::noise: {
          const auto report = noise_robustness(m, config, options.etas, options.noise_seeds);
          for (double eta : options.etas) {
            const std::string suffix = "_eta" + format_double(eta);
            emit("rho_countries" + suffix, report.find({format_double(eta), "mean"}, "rho_countries"));
            emit("rho_products" + suffix, report.find({format_double(eta), "mean"}, "rho_products"));
          }
          break;
        }
        case ExperimentKind::volatility:
          throw InvalidArgument("volatility needs two networks and cannot be swept over one matrix");
      }
    }
    if (scores.underflow) emit("underflow", 1.0);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.method, a.parameter_value, a.statistic) < std::tie(b.method, b.parameter_value, b.statistic);
  });
  return rows;
}

}  // namespace ecorank
