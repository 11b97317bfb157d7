#pragma once

#include <cstdint>

#include "ecorank/core.hpp"

namespace ecorank {

/// Country k (1-based, k = 1 most diversified) exports products
/// 1..ceil(m * (n - k + 1) / n). Labels are C001.., P001.. so that label
/// order equals index order.
BipartiteMatrix perfectly_nested(Index n, Index m);

/// perfectly_nested with round(eta * n * m) random cells flipped, isolated
/// nodes removed.
BipartiteMatrix nested_with_noise(Index n, Index m, double eta, std::uint64_t seed);

/// Each cell set independently with probability p, isolated nodes removed.
BipartiteMatrix random_matrix(Index n, Index m, double p, std::uint64_t seed);

}  // namespace ecorank
