#include "ecorank/ranking.hpp"

namespace ecorank {

namespace {

ScoreVector make_scores(const BipartiteMatrix& m, Side side, Eigen::VectorXd values, std::string tag) {
  ScoreVector s;
  s.side = side;
  s.labels = m.labels(side);
  s.values = std::move(values);
  s.method_tag = std::move(tag);
  return s;
}

}  // namespace

MethodScores mr_method_scores(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order) {
  if (order < 0 || order % 2 != 0 || order > traj.max_order()) {
    throw InvalidArgument("MR rankings are defined for even orders within the trajectory");
  }
  const std::string tag = "mr order=" + std::to_string(order);
  MethodScores out;
  out.countries = make_scores(m, Side::countries, traj.country_scores[order], tag);
  out.products = make_scores(m, Side::products, traj.product_scores[order], tag);
  out.country_direction = Direction::high_is_good;
  out.product_direction = Direction::low_is_good;
  return out;
}

MethodScores fcm_method_scores(const BipartiteMatrix& m, const FcmResult<double>& result) {
  MethodConfig config;
  config.method = FcmParams{result.gamma, result.iterations_run, std::nullopt};
  const std::string tag = describe(config);
  MethodScores out;
  // Scores below the normal range carry no usable ordering; flush them to
  // zero so the tail becomes a single tie group.
  const auto flush = [](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return (v.array() < std::numeric_limits<double>::min()).select(0.0, v);
  };
  out.countries = make_scores(m, Side::countries, flush(result.fitness), tag);
  out.products = make_scores(m, Side::products, flush(result.complexity), tag);
  out.country_direction = Direction::high_is_good;
  out.product_direction = Direction::high_is_good;
  out.underflow = result.underflow;
  out.condensation_warning = result.condensation_warning;
  return out;
}

MethodScores score_network(const BipartiteMatrix& m, const MethodConfig& config) {
  validate(config);
  if (const auto* mr = std::get_if<MrParams>(&config.method)) {
    const auto traj = mr_iterate<double>(m, mr->order, mr->order_limit);
    return mr_method_scores(m, traj, mr->order);
  }
  const auto& fcm = std::get<FcmParams>(config.method);
  const auto result = fcm_scores<double>(m, FcmOptions{fcm.gamma, fcm.iterations, fcm.tolerance});
  MethodScores out = fcm_method_scores(m, result);
  const std::string tag = describe(config);
  out.countries.method_tag = tag;
  out.products.method_tag = tag;
  return out;
}

Ranking mr_product_ranking(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order) {
  const auto scores = mr_method_scores(m, traj, order);
  return ranking_from_scores(scores.products, scores.product_direction);
}

ScoreVector eci_scores(const BipartiteMatrix& m, const MrTrajectory<double>& traj, int order) {
  return make_scores(m, Side::countries, eci(traj, order), "eci order=" + std::to_string(order));
}

}  // namespace ecorank
