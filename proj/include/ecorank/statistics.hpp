#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ecorank/core.hpp"

namespace ecorank {

/// 1-based ranks in increasing value order; tied values share the mean of
/// the positions they span.
template <typename Derived>
Eigen::VectorXd fractional_ranks(const Eigen::DenseBase<Derived>& x) {
  const Index n = x.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return x(a) < x(b); });

  Eigen::VectorXd ranks(n);
  Index begin = 0;
  while (begin < n) {
    Index end = begin + 1;
    while (end < n && x(order[end]) == x(order[begin])) ++end;
    const double mean_position = 0.5 * static_cast<double>(begin + 1 + end);
    for (Index k = begin; k < end; ++k) ranks[order[k]] = mean_position;
    begin = end;
  }
  return ranks;
}

/// Spearman rank correlation: Pearson correlation of fractional ranks.
/// Throws DegenerateInput when either input is constant.
template <typename DerivedX, typename DerivedY>
double spearman(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
  if (x.size() != y.size()) throw InvalidArgument("spearman: inputs differ in length");
  if (x.size() < 2) throw DegenerateInput("spearman: need at least two observations");
  const Eigen::VectorXd rx = fractional_ranks(x);
  const Eigen::VectorXd ry = fractional_ranks(y);
  const Eigen::ArrayXd cx = rx.array() - rx.mean();
  const Eigen::ArrayXd cy = ry.array() - ry.mean();
  const double sxx = cx.square().sum();
  const double syy = cy.square().sum();
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("spearman: constant input");
  const double rho = (cx * cy).sum() / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

/// Spearman correlation of two score vectors over the same label set.
/// Labels are matched by name; throws LabelMismatch when the sets differ.
double spearman(const ScoreVector& x, const ScoreVector& y);

/// Spearman correlation restricted to labels present in both vectors.
/// Throws EmptyIntersection when no label is shared.
double spearman_on_shared_labels(const ScoreVector& x, const ScoreVector& y);

/// Both vectors restricted to shared labels, in x's label order.
std::pair<Eigen::VectorXd, Eigen::VectorXd> align_on_shared_labels(const ScoreVector& x, const ScoreVector& y);

}  // namespace ecorank
