#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecorank/core.hpp"
#include "ecorank/ranking.hpp"

namespace ecorank {

inline constexpr int kDefaultTieTrials = 100;

/// Fraction of opposite-side nodes extinct after each removal.
struct ExtinctionCurve {
  Side removed_side = Side::countries;
  /// Extinct opposite-side nodes after k+1 removals.
  std::vector<Index> extinct;
  Index opposite_size = 0;

  Index removals() const noexcept { return static_cast<Index>(extinct.size()); }
  double value(Index k) const { return static_cast<double>(extinct.at(k)) / static_cast<double>(opposite_size); }
  std::vector<double> values() const;
};

/// Removes nodes of `side` in the given order (indices into the matrix)
/// and records extinctions on the other side. A node goes extinct when
/// its last neighbor is removed.
ExtinctionCurve extinction_curve(const BipartiteMatrix& m, Side side, std::span<const Index> removal_order);

/// Removal order taken from a ranking: countries best-first, products
/// worst-first. The ranking is never recomputed during removal.
ExtinctionCurve extinction_curve(const BipartiteMatrix& m, const Ranking& ranking);

/// Area under the step curve, right-endpoint rule: mean of the values.
double extinction_area(const ExtinctionCurve& curve);

/// Mean extinction area over `trials` rankings in which every tie group
/// is shuffled uniformly at random. Without ties a single evaluation is
/// returned.
double extinction_area_tie_averaged(const BipartiteMatrix& m, const ScoreVector& scores, Direction direction,
                                    int trials = kDefaultTieTrials, std::uint64_t seed = 0);

/// Matrix indices of the ranked side in removal sequence: countries best
/// first, products worst first. Throws LabelMismatch.
std::vector<Index> removal_order(const BipartiteMatrix& m, const Ranking& ranking);

/// Linear (column-major) indices of round(eta * N * M) distinct cells,
/// sampled uniformly without replacement, in sampling order.
std::vector<Index> sample_flip_cells(Index rows, Index cols, double eta, std::uint64_t seed);

/// Inverts the listed cells. Applying the same cells twice is the identity.
BipartiteMatrix flip_cells(const BipartiteMatrix& m, std::span<const Index> cells);

/// Inverts round(eta * N * M) random cells. Isolated nodes are kept; callers
/// that re-rank must pass the result through drop_isolated.
BipartiteMatrix flip_noise(const BipartiteMatrix& m, double eta, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Experiment reports

enum class ExperimentKind { extinction, noise, volatility, correlation };

const char* to_string(ExperimentKind kind) noexcept;

/// One row of a report table; a missing statistic was degenerate.
struct ReportRow {
  std::vector<std::string> parameters;
  std::vector<std::optional<double>> statistics;
};

struct EvaluationReport {
  ExperimentKind kind = ExperimentKind::extinction;
  std::string method_tag;
  /// Settings shared by all rows (trials, seed base, years...).
  std::map<std::string, std::string> settings;
  std::vector<std::string> parameter_columns;
  std::vector<std::string> statistic_columns;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  /// Value of a statistic in the first row whose parameters match.
  std::optional<double> find(const std::vector<std::string>& parameters, const std::string& statistic) const;
};

/// E_C and E_P for one method, each averaged over tie shuffles.
EvaluationReport extinction_report(const BipartiteMatrix& m, const MethodConfig& config,
                                   int trials = kDefaultTieTrials, std::uint64_t seed = 0);

/// E for one side from externally supplied scores.
EvaluationReport extinction_report(const BipartiteMatrix& m, const ScoreVector& scores, Direction direction,
                                   int trials = kDefaultTieTrials, std::uint64_t seed = 0);

/// For each (eta, seed): flip, drop isolated nodes, re-rank with the same
/// configuration and correlate original and perturbed scores on shared
/// labels. One row per (eta, seed) plus a "mean" row per eta.
EvaluationReport noise_robustness(const BipartiteMatrix& m, const MethodConfig& config, std::span<const double> etas,
                                  std::span<const std::uint64_t> seeds);

/// Spearman correlation between the rankings of two networks (e.g.
/// consecutive years) on the labels they share.
EvaluationReport volatility(const BipartiteMatrix& first, const BipartiteMatrix& second, const MethodConfig& config);

/// Rank correlation of method scores with degree: countries against
/// diversification, products against ubiquity (ranked increasing), and
/// for FCM products against least-fit-exporter fitness.
EvaluationReport correlation_report(const BipartiteMatrix& m, const MethodConfig& config);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepOptions {
  std::vector<ExperimentKind> experiments{ExperimentKind::extinction, ExperimentKind::correlation};
  int trials = kDefaultTieTrials;
  std::uint64_t seed = 0;
  std::vector<double> etas{0.05};
  std::vector<std::uint64_t> noise_seeds{0};
};

/// Long-format table row: method, parameter, value, statistic, value.
struct SweepRow {
  std::string method;
  std::string parameter;
  double parameter_value = 0.0;
  std::string statistic;
  std::optional<double> value;
};

/// Runs the selected experiments for every configuration in the grid.
/// Rows are sorted by (method, parameter value, statistic).
std::vector<SweepRow> sweep(const BipartiteMatrix& m, std::span<const MethodConfig> grid, const SweepOptions& options);

}  // namespace ecorank
