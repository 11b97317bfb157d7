#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ecorank/core.hpp"

namespace ecorank {

inline constexpr int kDefaultMrOrderLimit = 20;
inline constexpr int kDefaultFcmIterations = 1000;
/// Below this extremality the iteration enters the condensed phase.
inline constexpr double kCondensationGamma = 0.6;

namespace detail {

inline void require_positive_degrees(const BipartiteMatrix& m) {
  if ((m.diversification().array() == 0).any() || (m.ubiquity().array() == 0).any()) {
    throw ZeroDegree("network has zero-degree nodes; run drop_isolated first");
  }
}

template <typename Scalar>
Scalar population_std(const Vector<Scalar>& v) {
  const Scalar mean = v.mean();
  return std::sqrt((v.array() - mean).square().mean());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Method of reflections

/// Generalized diversification/ubiquity of every order 0..max_order().
template <typename Scalar = double>
struct MrTrajectory {
  std::vector<Vector<Scalar>> country_scores;
  std::vector<Vector<Scalar>> product_scores;

  int max_order() const noexcept { return static_cast<int>(country_scores.size()) - 1; }
};

/// Runs the reflection recursion up to `max_order` (even). Both sides of
/// order n are computed from order n-1 values.
template <typename Scalar = double>
MrTrajectory<Scalar> mr_iterate(const BipartiteMatrix& m, int max_order, int order_limit = kDefaultMrOrderLimit) {
  if (max_order < 0 || max_order % 2 != 0) {
    throw InvalidArgument("MR order must be a non-negative even integer");
  }
  if (max_order > order_limit) {
    throw InvalidArgument("MR order " + std::to_string(max_order) + " exceeds limit " + std::to_string(order_limit));
  }
  detail::require_positive_degrees(m);

  const SparseIncidence<Scalar> rows = m.incidence<Scalar>();
  const SparseIncidence<Scalar> cols = m.incidence_transposed<Scalar>();
  const Vector<Scalar> d = m.diversification().cast<Scalar>();
  const Vector<Scalar> u = m.ubiquity().cast<Scalar>();

  MrTrajectory<Scalar> traj;
  traj.country_scores.reserve(max_order + 1);
  traj.product_scores.reserve(max_order + 1);
  traj.country_scores.push_back(d);
  traj.product_scores.push_back(u);
  for (int n = 1; n <= max_order; ++n) {
    const auto& prev_d = traj.country_scores.back();
    const auto& prev_u = traj.product_scores.back();
    Vector<Scalar> next_d = (rows * prev_u).cwiseQuotient(d);
    Vector<Scalar> next_u = (cols * prev_d).cwiseQuotient(u);
    traj.country_scores.push_back(std::move(next_d));
    traj.product_scores.push_back(std::move(next_u));
  }
  return traj;
}

/// Standardized even-order country score (mean 0, population std 1).
template <typename Scalar = double>
Vector<Scalar> eci(const MrTrajectory<Scalar>& traj, int order) {
  if (order < 0 || order % 2 != 0 || order > traj.max_order()) {
    throw InvalidArgument("ECI order must be even and within the trajectory");
  }
  const Vector<Scalar>& d = traj.country_scores[order];
  const Scalar mean = d.mean();
  const Scalar sigma = detail::population_std(d);
  if (!(sigma > std::numeric_limits<Scalar>::epsilon() * std::abs(mean))) {
    throw DegenerateScores("order-" + std::to_string(order) + " country scores are uniform");
  }
  return (d.array() - mean) / sigma;
}

// ---------------------------------------------------------------------------
// Fitness-complexity

template <typename Scalar = double>
struct FcmState {
  Vector<Scalar> fitness;
  Vector<Scalar> complexity;
};

template <typename Scalar = double>
struct FcmResult {
  Vector<Scalar> fitness;
  Vector<Scalar> complexity;
  double gamma = 1.0;
  int iterations_run = 0;
  bool underflow = false;
  bool condensation_warning = false;
  bool converged = false;
};

/// One normalized step of the generalized fitness-complexity map:
///
///   F~_i = sum_a M_ia Q_a
///   Q~_a = [ sum_i M_ia F_i^-gamma ]^(-1/gamma)
///
/// each side then divided by its arithmetic mean. For gamma == 1 the
/// complexity update is evaluated literally as 1 / sum_i M_ia / F_i. For
/// other gamma, products whose power sum overflows are re-evaluated
/// relative to their least-fit exporter.
template <typename Scalar = double>
class FitnessComplexityMap {
 public:
  FitnessComplexityMap(const BipartiteMatrix& m, Scalar gamma)
      : rows_(m.incidence<Scalar>()), cols_(m.incidence_transposed<Scalar>()), gamma_(gamma) {
    if (!(gamma > Scalar(0)) || !std::isfinite(static_cast<double>(gamma))) {
      throw NonPositiveGamma(static_cast<double>(gamma));
    }
    detail::require_positive_degrees(m);
  }

  Scalar gamma() const noexcept { return gamma_; }

  FcmState<Scalar> initial() const {
    return {Vector<Scalar>::Ones(rows_.rows()), Vector<Scalar>::Ones(cols_.rows())};
  }

  FcmState<Scalar> operator()(const FcmState<Scalar>& prev) const {
    FcmState<Scalar> next;
    next.fitness = rows_ * prev.complexity;
    next.complexity = raw_complexity(prev.fitness);
    normalize(next.fitness);
    normalize(next.complexity);
    return next;
  }

 private:
  Vector<Scalar> raw_complexity(const Vector<Scalar>& fitness) const {
    Vector<Scalar> q(cols_.rows());
    if (gamma_ == Scalar(1)) {
      const Vector<Scalar> inverse = fitness.cwiseInverse();
      q = (cols_ * inverse).cwiseInverse();
      return q;
    }
    const Vector<Scalar> powered = fitness.array().pow(-gamma_);
    const Vector<Scalar> sums = cols_ * powered;
    q = sums.array().pow(Scalar(-1) / gamma_);
    for (Index a = 0; a < cols_.outerSize(); ++a) {
      if (!std::isfinite(static_cast<double>(sums[a])) || !(sums[a] >= std::numeric_limits<Scalar>::min())) {
        q[a] = relative_power_mean(fitness, a);
      }
    }
    return q;
  }

  // Same quantity, factored by the least-fit exporter of product `a`.
  Scalar relative_power_mean(const Vector<Scalar>& fitness, Index a) const {
    Scalar least = std::numeric_limits<Scalar>::infinity();
    for (typename SparseIncidence<Scalar>::InnerIterator it(cols_, a); it; ++it) {
      least = std::min(least, fitness[it.index()]);
    }
    if (least == Scalar(0)) return Scalar(0);
    Scalar sum(0);
    for (typename SparseIncidence<Scalar>::InnerIterator it(cols_, a); it; ++it) {
      sum += std::pow(fitness[it.index()] / least, -gamma_);
    }
    return least * std::pow(sum, Scalar(-1) / gamma_);
  }

  static void normalize(Vector<Scalar>& v) {
    const Scalar mean = v.mean();
    if (!(mean > Scalar(0)) || !std::isfinite(static_cast<double>(mean))) {
      throw NumericalError("fitness-complexity scores lost all mass");
    }
    v /= mean;
  }

  SparseIncidence<Scalar> rows_;
  SparseIncidence<Scalar> cols_;
  Scalar gamma_;
};

struct FcmOptions {
  double gamma = 1.0;
  int iterations = kDefaultFcmIterations;
  /// Stop early once the max relative change of every score drops below
  /// this value. Off by default: a fixed iteration count is used.
  std::optional<double> tolerance;
};

namespace detail {

template <typename Scalar>
bool lost_precision(const Vector<Scalar>& v) {
  return (v.array() < std::numeric_limits<Scalar>::min()).any();
}

template <typename Scalar>
Scalar max_relative_change(const Vector<Scalar>& before, const Vector<Scalar>& after) {
  return ((after - before).array().abs() / after.array().abs().max(std::numeric_limits<Scalar>::min())).maxCoeff();
}

}  // namespace detail

/// Iterates the generalized fitness-complexity map from F = Q = 1.
template <typename Scalar = double>
FcmResult<Scalar> fcm_scores(const BipartiteMatrix& m, const FcmOptions& options = {}) {
  if (options.iterations < 1) throw InvalidArgument("FCM needs at least one iteration");
  const FitnessComplexityMap<Scalar> step(m, static_cast<Scalar>(options.gamma));

  FcmResult<Scalar> result;
  result.gamma = options.gamma;
  result.condensation_warning = options.gamma <= kCondensationGamma;

  FcmState<Scalar> state = step.initial();
  for (int n = 1; n <= options.iterations; ++n) {
    FcmState<Scalar> next = step(state);
    result.iterations_run = n;
    result.underflow = result.underflow || detail::lost_precision(next.fitness) ||
                       detail::lost_precision(next.complexity);
    if (options.tolerance) {
      const Scalar change = std::max(detail::max_relative_change(state.fitness, next.fitness),
                                     detail::max_relative_change(state.complexity, next.complexity));
      state = std::move(next);
      if (change < static_cast<Scalar>(*options.tolerance)) {
        result.converged = true;
        break;
      }
    } else {
      state = std::move(next);
    }
  }
  result.fitness = std::move(state.fitness);
  result.complexity = std::move(state.complexity);
  return result;
}

/// Per product, the lowest fitness among its exporters.
template <typename Derived>
Eigen::VectorXd least_fit_exporter_score(const BipartiteMatrix& m, const Eigen::MatrixBase<Derived>& fitness) {
  if (fitness.size() != m.countries()) throw LabelMismatch("fitness vector does not cover all countries");
  Eigen::VectorXd out(m.products());
  for (Index a = 0; a < m.products(); ++a) {
    double least = std::numeric_limits<double>::infinity();
    for (Index i : m.exporters_of(a)) least = std::min(least, static_cast<double>(fitness[i]));
    out[a] = least;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Score vectors and rankings for a method configuration

struct MethodScores {
  ScoreVector countries;
  ScoreVector products;
  Direction country_direction = Direction::high_is_good;
  Direction product_direction = Direction::high_is_good;
  bool underflow = false;
  bool condensation_warning = false;

  const ScoreVector& scores(Side side) const noexcept { return side == Side::countries ? countries : products; }
  Direction direction(Side side) const noexcept {
    return side == Side::countries ? country_direction : product_direction;
  }
};

/// Country scores d^(n) (high is good) and product scores u^(n) (low is good).
MethodScores mr_method_scores(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order);

/// Fitness and complexity, both high is good.
MethodScores fcm_method_scores(const BipartiteMatrix& m, const FcmResult<double>& result);

/// Computes the scores of whichever method `config` selects.
MethodScores score_network(const BipartiteMatrix& m, const MethodConfig& config);

/// Products ordered by increasing u^(order).
Ranking mr_product_ranking(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order);

/// Standardized MR country scores as a score vector.
ScoreVector eci_scores(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order);

}  // namespace ecorank
