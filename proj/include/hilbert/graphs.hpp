#pragma once

// Seeded dataset generators: random graphs, shortest-path distance matrices,
// random-walk similarity matrices and random point clouds.

#include <Eigen/Core>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace hilbert {

/// Dense row-major matrix used for targets and embeddings.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Undirected simple graph on nodes [0, n).
class Graph {
public:
  explicit Graph(std::size_t n);

  /// Adds {a, b}; returns false if it was already present. Rejects self-loops.
  bool add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }

  /// Edges as (min, max) pairs in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.edges() == b.edges() && a.node_count() == b.node_count(); }

private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Symmetric, zero-diagonal, finite, nonnegative matrix.
class DistanceMatrix {
public:
  explicit DistanceMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
  Matrix values_;
};

/// Nonnegative matrix with zero diagonal whose rows each sum to 1.
class SimilarityMatrix {
public:
  explicit SimilarityMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
  Matrix values_;
};

inline constexpr int kMaxConnectivityAttempts = 100;

/// G(n, p), resampled with derived seeds until connected.
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Preferential attachment from an (m+1)-clique; every new node links to m
/// distinct existing nodes drawn proportionally to degree.
Graph gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Hop-count distances by BFS from every node. Throws DataError when disconnected.
DistanceMatrix all_pairs_shortest_paths(const Graph& g);

/// Rows of T^steps for the degree-normalized adjacency T, with the diagonal
/// removed and rows renormalized.
SimilarityMatrix random_walk_similarity(const Graph& g, int steps);

/// Pairwise Euclidean distances between n standard Gaussian points in R^n.
DistanceMatrix random_points_distance_matrix(std::size_t n, std::uint64_t seed);

}  // namespace hilbert
