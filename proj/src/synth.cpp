#include "ecorank/synth.hpp"

#include <random>
#include <string>

#include "ecorank/eval.hpp"

namespace ecorank {

namespace {

std::vector<std::string> make_labels(char prefix, Index count) {
  const auto width = std::max<std::size_t>(3, std::to_string(count).size());
  std::vector<std::string> labels;
  labels.reserve(count);
  for (Index k = 1; k <= count; ++k) {
    std::string digits = std::to_string(k);
    labels.push_back(prefix + std::string(width - digits.size(), '0') + digits);
  }
  return labels;
}

void require_shape(Index n, Index m) {
  if (n < 1 || m < 1) throw InvalidArgument("synthetic networks need at least one country and one product");
}

}  // namespace

BipartiteMatrix perfectly_nested(Index n, Index m) {
  require_shape(n, m);
  IncidenceMatrix entries = IncidenceMatrix::Zero(n, m);
  for (Index k = 1; k <= n; ++k) {
    const Index width = (m * (n - k + 1) + n - 1) / n;
    entries.row(k - 1).head(width).setOnes();
  }
  return BipartiteMatrix(make_labels('C', n), make_labels('P', m), std::move(entries));
}

BipartiteMatrix nested_with_noise(Index n, Index m, double eta, std::uint64_t seed) {
  return drop_isolated(flip_noise(perfectly_nested(n, m), eta, seed)).matrix;
}

BipartiteMatrix random_matrix(Index n, Index m, double p, std::uint64_t seed) {
  require_shape(n, m);
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("fill probability must lie in [0, 1]");
  std::mt19937_64 engine(seed);
  std::bernoulli_distribution fill(p);
  IncidenceMatrix entries(n, m);
  for (Index a = 0; a < m; ++a) {
    for (Index i = 0; i < n; ++i) entries(i, a) = fill(engine) ? 1 : 0;
  }
  return drop_isolated(BipartiteMatrix(make_labels('C', n), make_labels('P', m), std::move(entries))).matrix;
}

}  // namespace ecorank
