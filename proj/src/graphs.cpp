#include "hilbert/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "hilbert/errors.hpp"
#include "hilbert/random.hpp"

namespace hilbert {

Graph::Graph(std::size_t n) : adjacency_(n) {}

bool Graph::add_edge(std::size_t a, std::size_t b) {
  if (a >= node_count() || b >= node_count()) throw std::invalid_argument("Graph: node index out of range");
  if (a == b) throw std::invalid_argument("Graph: self-loops are not allowed");
  if (has_edge(a, b)) return false;
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  ++edge_count_;
  return true;
}

bool Graph::has_edge(std::size_t a, std::size_t b) const {
  const auto& small = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const std::size_t other = &small == &adjacency_[a] ? b : a;
  return std::find(small.begin(), small.end(), other) != small.end();
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    for (std::size_t w : adjacency_[v]) {
      if (v < w) out.emplace_back(v, w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::is_connected() const {
  if (adjacency_.empty()) return true;
  std::vector<bool> seen(adjacency_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == adjacency_.size();
}

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw std::invalid_argument("DistanceMatrix: must be square and nonempty");
  }
  const Eigen::Index n = values_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(values_(i, i)) > 1e-12) throw std::invalid_argument("DistanceMatrix: nonzero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = values_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw std::invalid_argument("DistanceMatrix: entries must be finite and nonnegative");
      }
      if (std::abs(a - values_(j, i)) > 1e-9 * std::max(1.0, std::abs(a))) {
        throw std::invalid_argument("DistanceMatrix: not symmetric");
      }
    }
  }
}

SimilarityMatrix::SimilarityMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols() || values_.rows() < 2) {
    throw std::invalid_argument("SimilarityMatrix: must be square with at least 2 rows");
  }
  const Eigen::Index n = values_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values_(i, i) != 0.0) throw std::invalid_argument("SimilarityMatrix: nonzero diagonal");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = values_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw std::invalid_argument("SimilarityMatrix: entries must be finite and nonnegative");
      }
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("SimilarityMatrix: row " + std::to_string(i) + " sums to " +
                                  std::to_string(sum));
    }
  }
}

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_erdos_renyi: n must be >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("gen_erdos_renyi: p must be in (0, 1]");
  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Graph g(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (rng.uniform01() < p) g.add_edge(a, b);
      }
    }
    if (g.is_connected()) return g;
  }
  throw DataError("gen_erdos_renyi: no connected graph after " +
                  std::to_string(kMaxConnectivityAttempts) + " attempts");
}

Graph gen_barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("gen_barabasi_albert: m must be >= 1");
  if (n <= m) throw std::invalid_argument("gen_barabasi_albert: n must exceed m");
  Rng rng(derive_seed(seed, 0));
  Graph g(n);
  // Each node appears once per incident edge, so uniform draws are degree-proportional.
  std::vector<std::size_t> endpoints;
  endpoints.reserve(2 * (m * (m + 1) / 2 + (n - m - 1) * m));
  for (std::size_t a = 0; a <= m; ++a) {
    for (std::size_t b = a + 1; b <= m; ++b) {
      g.add_edge(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  std::vector<std::size_t> targets;
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const std::size_t candidate = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), candidate) == targets.end()) {
        targets.push_back(candidate);
      }
    }
    for (std::size_t t : targets) {
      g.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

DistanceMatrix all_pairs_shortest_paths(const Graph& g) {
  const std::size_t n = g.node_count();
  Matrix dist = Matrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), -1.0);
  std::vector<std::size_t> queue(n);
  for (std::size_t source = 0; source < n; ++source) {
    auto row = dist.row(static_cast<Eigen::Index>(source));
    std::size_t head = 0, tail = 0;
    queue[tail++] = source;
    row(source) = 0.0;
    while (head < tail) {
      const std::size_t v = queue[head++];
      for (std::size_t w : g.neighbors(v)) {
        if (row(w) < 0.0) {
          row(w) = row(v) + 1.0;
          queue[tail++] = w;
        }
      }
    }
    if (tail != n) {
      throw DataError("all_pairs_shortest_paths: graph is disconnected (node " +
                      std::to_string(source) + " reaches " + std::to_string(tail) + " of " +
                      std::to_string(n) + " nodes)");
    }
  }
  return DistanceMatrix(std::move(dist));
}

SimilarityMatrix random_walk_similarity(const Graph& g, int steps) {
  if (steps < 1) throw std::invalid_argument("random_walk_similarity: steps must be >= 1");
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Matrix transition = Matrix::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const std::size_t deg = g.degree(static_cast<std::size_t>(v));
    if (deg == 0) throw DataError("random_walk_similarity: node " + std::to_string(v) + " is isolated");
    for (std::size_t w : g.neighbors(static_cast<std::size_t>(v))) {
      transition(v, static_cast<Eigen::Index>(w)) = 1.0 / static_cast<double>(deg);
    }
  }
  Matrix power = transition;
  for (int s = 1; s < steps; ++s) power = (power * transition).eval();

  for (Eigen::Index i = 0; i < n; ++i) {
    power(i, i) = 0.0;
    const double sum = power.row(i).sum();
    if (!(sum > 0.0)) {
      throw DataError("random_walk_similarity: no walk from node " + std::to_string(i) +
                      " ends at another node");
    }
    power.row(i) /= sum;
  }
  return SimilarityMatrix(std::move(power));
}

DistanceMatrix random_points_distance_matrix(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_points_distance_matrix: n must be >= 2");
  Rng rng(derive_seed(seed, 0));
  const auto size = static_cast<Eigen::Index>(n);
  Matrix points(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index k = 0; k < size; ++k) points(i, k) = rng.gaussian();
  }
  Matrix dist = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return DistanceMatrix(std::move(dist));
}

}  // namespace hilbert
