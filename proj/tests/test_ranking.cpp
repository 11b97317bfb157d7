#include <gtest/gtest.h>

#include "ecorank/ranking.hpp"
#include "ecorank/statistics.hpp"
#include "ecorank/synth.hpp"
#include "test_util.hpp"

using namespace ecorank;
using testutil::from_grid;

namespace {

void expect_near(const Eigen::VectorXd& v, const std::vector<double>& expected, double tol = 1e-12) {
  ASSERT_EQ(v.size(), static_cast<Index>(expected.size()));
  for (Index k = 0; k < v.size(); ++k) EXPECT_NEAR(v[k], expected[k], tol) << "at " << k;
}

const oracle::Grid kSmall{{1, 1}, {1, 0}};

}  // namespace

TEST(Reflections, TwoByTwoTrajectory) {
  const auto traj = mr_iterate(from_grid(kSmall), 2);
  ASSERT_EQ(traj.max_order(), 2);
  expect_near(traj.country_scores[0], {2, 1});
  expect_near(traj.product_scores[0], {2, 1});
  expect_near(traj.country_scores[1], {1.5, 2});
  expect_near(traj.product_scores[1], {1.5, 2});
  expect_near(traj.country_scores[2], {1.75, 1.5});
  // (d1_A + d1_B) / u_1 = (1.5 + 2) / 2.
  expect_near(traj.product_scores[2], {1.75, 1.5});
}

TEST(Reflections, MatchesNaiveLoop) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_matrix(15, 25, 0.25, seed);
    const auto traj = mr_iterate(m, 20);
    const auto ref = oracle::reflections(testutil::to_grid(m), 20);
    for (int n = 0; n <= 20; ++n) {
      for (Index i = 0; i < m.countries(); ++i) EXPECT_NEAR(traj.country_scores[n][i], ref.d[n][i], 1e-12);
      for (Index a = 0; a < m.products(); ++a) EXPECT_NEAR(traj.product_scores[n][a], ref.u[n][a], 1e-12);
    }
  }
}

TEST(Reflections, CompleteBipartiteAlternates) {
  const auto traj = mr_iterate(from_grid({{1, 1, 1}, {1, 1, 1}}), 6);
  for (int n = 0; n <= 6; ++n) {
    const double expected_d = n % 2 == 0 ? 3 : 2;
    EXPECT_TRUE((traj.country_scores[n].array() == expected_d).all()) << n;
  }
}

TEST(Reflections, OrderZeroIsDegrees) {
  const auto m = from_grid(kSmall);
  const auto traj = mr_iterate(m, 0);
  EXPECT_EQ(traj.max_order(), 0);
  EXPECT_EQ(traj.country_scores[0], m.diversification().cast<double>());
}

TEST(Reflections, Errors) {
  EXPECT_THROW(mr_iterate(from_grid(kSmall), 3), InvalidArgument);
  EXPECT_THROW(mr_iterate(from_grid(kSmall), 22), InvalidArgument);
  EXPECT_NO_THROW(mr_iterate(from_grid(kSmall), 22, 40));
  EXPECT_THROW(mr_iterate(from_grid({{1, 0}, {0, 0}}), 2), ZeroDegree);
}

TEST(Reflections, StdShrinksOnConnectedNetworks) {
  int tested = 0;
  for (std::uint64_t seed = 1; seed < 40 && tested < 10; ++seed) {
    const auto m = nested_with_noise(20, 35, 0.05, seed);
    if (!is_connected(m)) continue;
    ++tested;
    const auto traj = mr_iterate(m, 20);
    EXPECT_LT(detail::population_std(traj.country_scores[20]), detail::population_std(traj.country_scores[2]));
  }
  EXPECT_EQ(tested, 10);
}

TEST(Eci, Standardizes) {
  const auto traj = mr_iterate(from_grid(kSmall), 2);
  expect_near(eci(traj, 2), {1, -1});
  const auto m = random_matrix(20, 30, 0.3, 4);
  const auto e = eci(mr_iterate(m, 4), 4);
  EXPECT_NEAR(e.mean(), 0.0, 1e-12);
  EXPECT_NEAR(detail::population_std<double>(e), 1.0, 1e-12);
}

TEST(Eci, UniformScoresAreDegenerate) {
  const auto traj = mr_iterate(from_grid({{1, 1}, {1, 1}}), 2);
  EXPECT_THROW(eci(traj, 2), DegenerateScores);
  EXPECT_THROW(eci(traj, 1), InvalidArgument);
}

TEST(Eci, ScoreVectorWrapper) {
  const auto m = from_grid(kSmall);
  const auto s = eci_scores(m, mr_iterate(m, 2), 2);
  EXPECT_EQ(s.side, Side::countries);
  EXPECT_EQ(s.labels, m.country_labels());
  expect_near(s.values, {1, -1});
}

TEST(ReflectionRanking, ProductsByIncreasingUbiquity) {
  const auto m = from_grid(kSmall);
  const auto traj = mr_iterate(m, 2);
  EXPECT_EQ(mr_product_ranking(m, traj, 0).ordered_ids, (std::vector<std::string>{"p2", "p1"}));
  EXPECT_EQ(mr_product_ranking(m, traj, 2).ordered_ids, (std::vector<std::string>{"p2", "p1"}));
  const auto flat = from_grid({{1, 1}, {1, 1}});
  const auto r = mr_product_ranking(flat, mr_iterate(flat, 2), 2);
  EXPECT_EQ(r.tie_groups.size(), 1u);
  EXPECT_THROW(mr_product_ranking(m, traj, 1), InvalidArgument);
}

TEST(Fcm, OneStepFixture) {
  const auto r = fcm_scores(from_grid(kSmall), {1.0, 1, std::nullopt});
  expect_near(r.fitness, {4.0 / 3.0, 2.0 / 3.0});
  expect_near(r.complexity, {2.0 / 3.0, 4.0 / 3.0});
  EXPECT_EQ(r.iterations_run, 1);
  EXPECT_FALSE(r.underflow);
  EXPECT_FALSE(r.condensation_warning);
}

TEST(Fcm, CompleteBipartiteIsFixedPoint) {
  const auto m = from_grid({{1, 1, 1}, {1, 1, 1}});
  for (double gamma : {0.7, 1.0, 2.5}) {
    for (int iters : {1, 10, 1000}) {
      const auto r = fcm_scores(m, {gamma, iters, std::nullopt});
      EXPECT_TRUE(((r.fitness.array() - 1).abs() < 1e-14).all());
      EXPECT_TRUE(((r.complexity.array() - 1).abs() < 1e-14).all());
    }
  }
}

TEST(Fcm, GammaOneMatchesDirectLoopEveryIteration) {
  const auto m = random_matrix(20, 40, 0.2, 77);
  const auto ref = oracle::fcm_gamma1(testutil::to_grid(m), 200);
  const FitnessComplexityMap<double> step(m, 1.0);
  auto state = step.initial();
  for (int n = 0; n < 200; ++n) {
    state = step(state);
    for (Index i = 0; i < m.countries(); ++i) ASSERT_NEAR(state.fitness[i], ref.fitness[n][i], 1e-12);
    for (Index a = 0; a < m.products(); ++a) ASSERT_NEAR(state.complexity[a], ref.complexity[n][a], 1e-12);
  }
}

TEST(Fcm, NormalizedEveryIteration) {
  const auto m = nested_with_noise(30, 60, 0.05, 2);
  for (double gamma : {0.8, 1.0, 3.0}) {
    const FitnessComplexityMap<double> step(m, gamma);
    auto state = step.initial();
    for (int n = 0; n < 300; ++n) {
      state = step(state);
      ASSERT_NEAR(state.fitness.mean(), 1.0, 1e-12);
      ASSERT_NEAR(state.complexity.mean(), 1.0, 1e-12);
    }
  }
}

TEST(Fcm, ContinuityAroundGammaOne) {
  const auto m = random_matrix(50, 100, 0.15, 21);
  const auto a = fcm_scores(m, {1.0, 100, std::nullopt});
  const auto b = fcm_scores(m, {1.0 + 1e-15, 100, std::nullopt});
  EXPECT_LT((a.fitness - b.fitness).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((a.complexity - b.complexity).cwiseAbs().maxCoeff(), 1e-9);
  const auto rank = [&](const Eigen::VectorXd& v, Side side) {
    return ranking_from_scores({side, m.labels(side), v, ""}, Direction::high_is_good).ordered_ids;
  };
  EXPECT_EQ(rank(a.fitness, Side::countries), rank(b.fitness, Side::countries));
  EXPECT_EQ(rank(a.complexity, Side::products), rank(b.complexity, Side::products));
}

TEST(Fcm, GeneralGammaMatchesDirectPowerMean) {
  const auto m = random_matrix(10, 15, 0.4, 3);
  const double gamma = 2.5;
  const auto g = testutil::to_grid(m);
  std::vector<double> f(m.countries(), 1.0), q(m.products(), 1.0);
  const FitnessComplexityMap<double> step(m, gamma);
  auto state = step.initial();
  for (int n = 0; n < 30; ++n) {
    std::vector<double> nf(f.size(), 0.0), nq(q.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t a = 0; a < q.size(); ++a)
        if (g[i][a]) nf[i] += q[a];
    for (std::size_t a = 0; a < q.size(); ++a) {
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (g[i][a]) s += std::pow(f[i], -gamma);
      nq[a] = std::pow(s, -1.0 / gamma);
    }
    double mf = 0, mq = 0;
    for (double v : nf) mf += v / nf.size();
    for (double v : nq) mq += v / nq.size();
    for (auto& v : nf) v /= mf;
    for (auto& v : nq) v /= mq;
    f = nf;
    q = nq;
    state = step(state);
    for (std::size_t i = 0; i < f.size(); ++i) ASSERT_NEAR(state.fitness[i], f[i], 1e-12 * std::max(1.0, f[i]));
    for (std::size_t a = 0; a < q.size(); ++a) ASSERT_NEAR(state.complexity[a], q[a], 1e-12 * std::max(1.0, q[a]));
  }
}

TEST(Fcm, ExtremeGammaStaysFinite) {
  // Large gamma overflows F^-gamma for small fitness; the fallback keeps
  // the power mean finite.
  const auto m = nested_with_noise(40, 80, 0.03, 5);
  const auto r = fcm_scores(m, {30.0, 200, std::nullopt});
  EXPECT_TRUE(r.fitness.allFinite());
  EXPECT_TRUE(r.complexity.allFinite());
  EXPECT_TRUE((r.fitness.array() >= 0).all());
}

TEST(Fcm, CondensationWarningAndErrors) {
  const auto m = from_grid(kSmall);
  EXPECT_TRUE(fcm_scores(m, {0.6, 5, std::nullopt}).condensation_warning);
  EXPECT_TRUE(fcm_scores(m, {0.3, 5, std::nullopt}).condensation_warning);
  EXPECT_FALSE(fcm_scores(m, {0.61, 5, std::nullopt}).condensation_warning);
  EXPECT_THROW(fcm_scores(m, {0.0, 5, std::nullopt}), NonPositiveGamma);
  EXPECT_THROW(fcm_scores(m, {-2.0, 5, std::nullopt}), NonPositiveGamma);
  EXPECT_THROW(fcm_scores(m, {1.0, 0, std::nullopt}), InvalidArgument);
  EXPECT_THROW(fcm_scores(from_grid({{1, 0}, {0, 0}}), {}), ZeroDegree);
}

TEST(Fcm, UnderflowFlagOnNestedNetwork) {
  // On a perfectly nested network the weakest fitness decays towards zero.
  const auto m = perfectly_nested(250, 250);
  const auto short_run = fcm_scores(m, {10.0, 2000, std::nullopt});
  EXPECT_FALSE(short_run.underflow);
  EXPECT_TRUE((short_run.fitness.array() >= std::numeric_limits<double>::min()).all());
  const auto long_run = fcm_scores(m, {10.0, 4000, std::nullopt});
  ASSERT_TRUE(long_run.underflow);
  EXPECT_TRUE((long_run.fitness.array() < std::numeric_limits<double>::min()).any());
  // Subnormal tails are flushed so they form one tie group at the bottom.
  const auto scores = fcm_method_scores(m, long_run);
  const auto zeros = (scores.countries.values.array() == 0.0).count();
  EXPECT_GT(zeros, 0);
  const auto r = ranking_from_scores(scores.countries, scores.country_direction);
  EXPECT_EQ(r.tie_groups.back().second - r.tie_groups.back().first, zeros);
}

TEST(Fcm, ToleranceStopsEarly) {
  const auto m = random_matrix(20, 30, 0.4, 6);
  const auto r = fcm_scores(m, {1.0, 100000, 1e-3});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.iterations_run, 100000);
  const auto fixed = fcm_scores(m, {1.0, 50, std::nullopt});
  EXPECT_EQ(fixed.iterations_run, 50);
  EXPECT_FALSE(fixed.converged);
}

TEST(Fcm, DominancePreservedEveryIteration) {
  const auto m = perfectly_nested(12, 20);
  for (double gamma : {0.8, 1.0, 2.0, 4.0}) {
    const FitnessComplexityMap<double> step(m, gamma);
    auto state = step.initial();
    for (int n = 0; n < 200; ++n) {
      state = step(state);
      for (Index i = 1; i < m.countries(); ++i) ASSERT_GT(state.fitness[i - 1], state.fitness[i]) << gamma << " " << n;
    }
  }
}

TEST(Fcm, Deterministic) {
  const auto m = nested_with_noise(40, 70, 0.05, 9);
  const auto a = fcm_scores(m, {2.0, 300, std::nullopt});
  const auto b = fcm_scores(m, {2.0, 300, std::nullopt});
  EXPECT_EQ(a.fitness, b.fitness);
  EXPECT_EQ(a.complexity, b.complexity);
}

TEST(Fcm, ExtremalityGrowsWithGamma) {
  double low = 0.0, high = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = nested_with_noise(40, 80, 0.05, seed);
    const auto r1 = fcm_scores(m, {1.0, 1000, std::nullopt});
    const auto r4 = fcm_scores(m, {4.0, 1000, std::nullopt});
    low += spearman(r1.complexity, least_fit_exporter_score(m, r1.fitness));
    high += spearman(r4.complexity, least_fit_exporter_score(m, r4.fitness));
  }
  EXPECT_GE(high, low);
}

TEST(LeastFitExporter, Examples) {
  const auto m = from_grid(kSmall);
  expect_near(least_fit_exporter_score(m, Eigen::Vector2d(4.0 / 3.0, 2.0 / 3.0)), {2.0 / 3.0, 4.0 / 3.0});
  const auto single = from_grid({{1, 0}, {0, 1}});
  expect_near(least_fit_exporter_score(single, Eigen::Vector2d(3.0, 5.0)), {3.0, 5.0});
  expect_near(least_fit_exporter_score(m, Eigen::Vector2d(1.0, 1.0)), {1.0, 1.0});
  EXPECT_THROW(least_fit_exporter_score(m, Eigen::Vector3d(1, 1, 1)), LabelMismatch);
}

TEST(MethodScores, DirectionsAndLabels) {
  const auto m = from_grid(kSmall);
  const auto mr = score_network(m, MethodConfig{MrParams{2, 20}});
  EXPECT_EQ(mr.country_direction, Direction::high_is_good);
  EXPECT_EQ(mr.product_direction, Direction::low_is_good);
  EXPECT_EQ(mr.products.labels, m.product_labels());
  expect_near(mr.products.values, {1.75, 1.5});
  const auto fcm = score_network(m, MethodConfig{FcmParams{1.0, 1, std::nullopt}});
  EXPECT_EQ(fcm.product_direction, Direction::high_is_good);
  expect_near(fcm.countries.values, {4.0 / 3.0, 2.0 / 3.0});
  EXPECT_EQ(fcm.countries.method_tag, "fcm gamma=1 iters=1");
  EXPECT_THROW(score_network(m, MethodConfig{MrParams{1, 20}}), InvalidArgument);
}
