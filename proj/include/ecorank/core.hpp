#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ecorank/error.hpp"

namespace ecorank {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Binary incidence storage, one byte per cell.
using IncidenceMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Row-major sparse view used by the iterative kernels. Each row is
/// accumulated in ascending column order, so identical rows always
/// produce bit-identical sums.
template <typename Scalar>
using SparseIncidence = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

enum class Side { countries, products };

enum class Direction { high_is_good, low_is_good };

Side opposite(Side side) noexcept;
const char* to_string(Side side) noexcept;
const char* to_string(Direction direction) noexcept;
Side parse_side(const std::string& text);
Direction parse_direction(const std::string& text);

/// Binary country x product export network.
///
/// Rows are countries, columns are products. Degrees and adjacency lists
/// are computed once at construction; the object is immutable afterwards.
class BipartiteMatrix {
 public:
  BipartiteMatrix(std::vector<std::string> country_labels, std::vector<std::string> product_labels,
                  IncidenceMatrix entries, std::optional<int> year = std::nullopt);

  /// Builds a matrix from (country, product) index pairs.
  static BipartiteMatrix from_edges(std::vector<std::string> country_labels,
                                    std::vector<std::string> product_labels,
                                    const std::vector<std::pair<Index, Index>>& edges,
                                    std::optional<int> year = std::nullopt);

  Index countries() const noexcept { return entries_.rows(); }
  Index products() const noexcept { return entries_.cols(); }
  Index size(Side side) const noexcept { return side == Side::countries ? countries() : products(); }
  Index links() const noexcept { return links_; }

  const std::vector<std::string>& country_labels() const noexcept { return country_labels_; }
  const std::vector<std::string>& product_labels() const noexcept { return product_labels_; }
  const std::vector<std::string>& labels(Side side) const noexcept {
    return side == Side::countries ? country_labels_ : product_labels_;
  }

  const IncidenceMatrix& entries() const noexcept { return entries_; }
  bool operator()(Index country, Index product) const { return entries_(country, product) != 0; }
  std::optional<int> year() const noexcept { return year_; }

  const Eigen::VectorXi& diversification() const noexcept { return diversification_; }
  const Eigen::VectorXi& ubiquity() const noexcept { return ubiquity_; }
  const Eigen::VectorXi& degrees(Side side) const noexcept {
    return side == Side::countries ? diversification_ : ubiquity_;
  }

  /// Products exported by a country, ascending.
  const std::vector<Index>& exports_of(Index country) const { return country_support_[country]; }
  /// Countries exporting a product, ascending.
  const std::vector<Index>& exporters_of(Index product) const { return product_support_[product]; }
  const std::vector<std::vector<Index>>& neighbors(Side side) const noexcept {
    return side == Side::countries ? country_support_ : product_support_;
  }

  /// N x M incidence as a sparse matrix.
  template <typename Scalar = double>
  SparseIncidence<Scalar> incidence() const {
    SparseIncidence<Scalar> out(countries(), products());
    out.reserve(Eigen::VectorXi(diversification_));
    for (Index i = 0; i < countries(); ++i) {
      for (Index a : country_support_[i]) out.insert(i, a) = Scalar(1);
    }
    out.makeCompressed();
    return out;
  }

  /// M x N incidence (products as rows) as a sparse matrix.
  template <typename Scalar = double>
  SparseIncidence<Scalar> incidence_transposed() const {
    SparseIncidence<Scalar> out(products(), countries());
    out.reserve(Eigen::VectorXi(ubiquity_));
    for (Index a = 0; a < products(); ++a) {
      for (Index i : product_support_[a]) out.insert(a, i) = Scalar(1);
    }
    out.makeCompressed();
    return out;
  }

  /// Submatrix keeping the listed rows and columns in the given order.
  BipartiteMatrix select(const std::vector<Index>& rows, const std::vector<Index>& cols) const;

  /// Index of a label on one side, or nullopt.
  std::optional<Index> find(Side side, const std::string& label) const;

  friend bool operator==(const BipartiteMatrix& a, const BipartiteMatrix& b);

 private:
  std::vector<std::string> country_labels_;
  std::vector<std::string> product_labels_;
  IncidenceMatrix entries_;
  std::optional<int> year_;
  Eigen::VectorXi diversification_;
  Eigen::VectorXi ubiquity_;
  std::vector<std::vector<Index>> country_support_;
  std::vector<std::vector<Index>> product_support_;
  Index links_ = 0;
};

/// Real-valued scores for one side of the network, in label order.
struct ScoreVector {
  Side side = Side::countries;
  std::vector<std::string> labels;
  Eigen::VectorXd values;
  std::string method_tag;

  Index size() const noexcept { return values.size(); }
};

/// Nodes of one side ordered best-first.
struct Ranking {
  Side side = Side::countries;
  Direction direction = Direction::high_is_good;
  /// Node indices (into the score vector's labels), best first.
  std::vector<Index> order;
  std::vector<std::string> ordered_ids;
  /// Half-open position ranges [first, second) of maximal equal-score blocks.
  /// Together they partition 0..size().
  std::vector<std::pair<Index, Index>> tie_groups;
  ScoreVector source_scores;

  Index size() const noexcept { return static_cast<Index>(order.size()); }
  bool has_ties() const noexcept { return tie_groups.size() < order.size(); }
};

struct MrParams {
  int order = 2;
  /// Highest order accepted; orders beyond 20 carry little information.
  int order_limit = 20;
};

struct FcmParams {
  double gamma = 1.0;
  int iterations = 1000;
  /// Optional early stop on max relative score change; off by default.
  std::optional<double> tolerance;
};

struct MethodConfig {
  std::variant<MrParams, FcmParams> method = FcmParams{};
  std::uint64_t rng_seed = 0;
  double rca_threshold = 1.0;

  bool is_mr() const noexcept { return std::holds_alternative<MrParams>(method); }
  bool is_fcm() const noexcept { return std::holds_alternative<FcmParams>(method); }
};

/// Throws InvalidArgument (or NonPositiveGamma) for out-of-domain parameters.
void validate(const MethodConfig& config);

/// Human readable tag, e.g. "fcm gamma=1 iters=1000".
std::string describe(const MethodConfig& config);

/// Compact tag suitable for file names, e.g. "fcm_gamma1_iters1000".
std::string file_tag(const MethodConfig& config);

/// Row sums (diversification) and column sums (ubiquity).
std::pair<Eigen::VectorXi, Eigen::VectorXi> degrees(const BipartiteMatrix& m);

struct IsolationResult {
  BipartiteMatrix matrix;
  std::vector<std::string> removed_countries;
  std::vector<std::string> removed_products;

  bool removed_any() const noexcept { return !removed_countries.empty() || !removed_products.empty(); }
};

/// Removes zero-degree rows and columns until none remain.
/// Throws EmptyNetwork if nothing survives.
IsolationResult drop_isolated(const BipartiteMatrix& m);

/// True when the bipartite graph has a single connected component.
bool is_connected(const BipartiteMatrix& m);

/// Rows ordered best country first, columns best product first.
BipartiteMatrix sort_matrix(const BipartiteMatrix& m, const Ranking& countries, const Ranking& products);

/// Deterministic ranking: primary key score, secondary key label.
Ranking ranking_from_scores(const ScoreVector& scores, Direction direction);

/// Exact string format of a double used in every output file.
std::string format_double(double value);

}  // namespace ecorank
