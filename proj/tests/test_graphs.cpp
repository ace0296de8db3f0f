#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hilbert/errors.hpp"
#include "hilbert/graphs.hpp"
#include "hilbert/matrix_io.hpp"
#include "test_support.hpp"

using namespace hilbert;
using hilbert::testing::floyd_warshall;
using hilbert::testing::walk_enumeration_oracle;

namespace {

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) g.add_edge(a, b);
  }
  return g;
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t a = 0; a + 1 < n; ++a) g.add_edge(a, a + 1);
  return g;
}

}  // namespace

TEST(GraphTest, EdgeBookkeeping) {
  Graph g(4);
  EXPECT_TRUE(g.add_edge(2, 1));
  EXPECT_FALSE(g.add_edge(1, 2));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_THROW(g.add_edge(3, 3), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 4), std::invalid_argument);
  EXPECT_FALSE(g.is_connected());
  g.add_edge(0, 1);
  g.add_edge(3, 2);
  EXPECT_TRUE(g.is_connected());
  const auto edges = g.edges();
  ASSERT_EQ(edges.size(), 3u);
  EXPECT_EQ(edges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(edges[2], (std::pair<std::size_t, std::size_t>{2, 3}));
}

TEST(MatrixTypes, DistanceValidation) {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  EXPECT_NO_THROW(DistanceMatrix{m});
  m(0, 1) = 2;
  EXPECT_THROW(DistanceMatrix{m}, std::invalid_argument);
  m << 0.5, 1, 1, 0;
  EXPECT_THROW(DistanceMatrix{m}, std::invalid_argument);
  m << 0, -1, -1, 0;
  EXPECT_THROW(DistanceMatrix{m}, std::invalid_argument);
  EXPECT_THROW(DistanceMatrix{Matrix(2, 3)}, std::invalid_argument);
}

TEST(MatrixTypes, SimilarityValidation) {
  Matrix m(3, 3);
  m << 0, 0.5, 0.5, 1, 0, 0, 0.25, 0.75, 0;
  EXPECT_NO_THROW(SimilarityMatrix{m});
  m(0, 1) = 0.6;
  EXPECT_THROW(SimilarityMatrix{m}, std::invalid_argument);
  m << 0.5, 0.5, 0, 1, 0, 0, 0.25, 0.75, 0;
  EXPECT_THROW(SimilarityMatrix{m}, std::invalid_argument);
}

TEST(ErdosRenyi, CompleteWhenPIsOne) {
  const Graph g = gen_erdos_renyi(5, 1.0, 3);
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_EQ(g, complete_graph(5));
}

TEST(ErdosRenyi, DeterministicAndConnected) {
  const Graph a = gen_erdos_renyi(50, 0.5, 17);
  const Graph b = gen_erdos_renyi(50, 0.5, 17);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.is_connected());
  EXPECT_NE(a, gen_erdos_renyi(50, 0.5, 18));
}

TEST(ErdosRenyi, MeanEdgeCountIsBinomialAtHighP) {
  // G(20, 0.5) is connected with probability > 0.9999, so the retry rule
  // leaves the Binomial(190, 0.5) edge count intact.
  constexpr int kSeeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < kSeeds; ++s) sum += static_cast<double>(gen_erdos_renyi(20, 0.5, s).edge_count());
  EXPECT_NEAR(sum / kSeeds, 95.0, 3.0 * std::sqrt(190.0 * 0.25 / kSeeds));
}

TEST(ErdosRenyi, MeanEdgeCountConditionedOnConnectivity) {
  // About a quarter of G(20, 0.2) draws are disconnected and get redrawn, so the
  // mean sits above 0.2 * 190 = 38. Compare with an independent Monte Carlo of
  // the binomial model conditioned on connectivity.
  std::mt19937_64 engine(12345);
  std::bernoulli_distribution coin(0.2);
  double oracle_sum = 0.0, oracle_sq = 0.0;
  int oracle_count = 0;
  while (oracle_count < 20000) {
    Graph g(20);
    for (std::size_t a = 0; a < 20; ++a) {
      for (std::size_t b = a + 1; b < 20; ++b) {
        if (coin(engine)) g.add_edge(a, b);
      }
    }
    if (!g.is_connected()) continue;
    const double e = static_cast<double>(g.edge_count());
    oracle_sum += e;
    oracle_sq += e * e;
    ++oracle_count;
  }
  const double oracle_mean = oracle_sum / oracle_count;
  const double variance = oracle_sq / oracle_count - oracle_mean * oracle_mean;

  constexpr int kSeeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < kSeeds; ++s) sum += static_cast<double>(gen_erdos_renyi(20, 0.2, s).edge_count());
  const double tolerance = 3.0 * std::sqrt(variance / kSeeds + variance / oracle_count);
  EXPECT_NEAR(sum / kSeeds, oracle_mean, tolerance);
  EXPECT_GT(oracle_mean, 38.5);
}

TEST(ErdosRenyi, Errors) {
  EXPECT_THROW(gen_erdos_renyi(1, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(gen_erdos_renyi(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(gen_erdos_renyi(10, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(gen_erdos_renyi(200, 0.001, 1), DataError);
}

TEST(BarabasiAlbert, SeedCliqueOnly) {
  for (std::size_t m : {1u, 2u, 4u}) EXPECT_EQ(gen_barabasi_albert(m + 1, m, 9), complete_graph(m + 1));
}

TEST(BarabasiAlbert, EdgeCountFormula) {
  EXPECT_EQ(gen_barabasi_albert(100, 2, 1).edge_count(), 197u);  // 3 + 97 * 2
  for (std::size_t m = 1; m <= 5; ++m) {
    for (std::size_t n = m + 1; n <= 60; n += 7) {
      const Graph g = gen_barabasi_albert(n, m, n * 31 + m);
      ASSERT_EQ(g.edge_count(), m * (m + 1) / 2 + (n - m - 1) * m);
      ASSERT_TRUE(g.is_connected());
    }
  }
}

TEST(BarabasiAlbert, HeavyTail) {
  std::size_t max_degree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = gen_barabasi_albert(100, 2, seed);
    for (std::size_t v = 0; v < 100; ++v) max_degree = std::max(max_degree, g.degree(v));
  }
  EXPECT_GT(max_degree, 8u);
}

TEST(BarabasiAlbert, Errors) {
  EXPECT_THROW(gen_barabasi_albert(3, 3, 1), std::invalid_argument);
  EXPECT_THROW(gen_barabasi_albert(3, 0, 1), std::invalid_argument);
  EXPECT_EQ(gen_barabasi_albert(40, 3, 5), gen_barabasi_albert(40, 3, 5));
}

TEST(ShortestPaths, Examples) {
  const DistanceMatrix k5 = all_pairs_shortest_paths(complete_graph(5));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(k5(i, j), i == j ? 0.0 : 1.0);
  }
  const DistanceMatrix path = all_pairs_shortest_paths(path_graph(4));
  EXPECT_EQ(path(0, 3), 3.0);
  EXPECT_EQ(path(3, 1), 2.0);
}

TEST(ShortestPaths, DisconnectedThrows) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  EXPECT_THROW(all_pairs_shortest_paths(g), DataError);
}

TEST(ShortestPaths, MatchesFloydWarshall) {
  Rng rng(301);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.below(29);
    const double p = rng.uniform(0.15, 0.9);
    const Graph g = gen_erdos_renyi(n, p, rng.next_u64());
    const Matrix expected = floyd_warshall(g);
    const DistanceMatrix D = all_pairs_shortest_paths(g);
    ASSERT_EQ(D.values(), expected);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) ASSERT_LE(D(i, j), D(i, k) + D(k, j));
      }
    }
  }
}

TEST(RandomWalk, Examples) {
  const SimilarityMatrix k3 = random_walk_similarity(complete_graph(3), 1);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(k3(i, j), i == j ? 0.0 : 0.5, 1e-15);
  }
  const SimilarityMatrix k4 = random_walk_similarity(complete_graph(4), 5);
  const Matrix oracle = walk_enumeration_oracle(complete_graph(4), 5);
  EXPECT_LE((k4.values() - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RandomWalk, RowsAndDiagonal) {
  Rng rng(302);
  for (int t = 0; t < 20; ++t) {
    const Graph g = gen_barabasi_albert(8 + rng.below(30), 1 + rng.below(3), rng.next_u64());
    const int steps = 1 + static_cast<int>(rng.below(6));
    const SimilarityMatrix P = random_walk_similarity(g, steps);
    for (std::size_t i = 0; i < P.size(); ++i) {
      ASSERT_EQ(P(i, i), 0.0);
      ASSERT_NEAR(P.values().row(static_cast<Eigen::Index>(i)).sum(), 1.0, 1e-12);
      ASSERT_GE(P.values().row(static_cast<Eigen::Index>(i)).minCoeff(), 0.0);
    }
  }
}

TEST(RandomWalk, MatchesEnumerationOnSmallGraphs) {
  Rng rng(303);
  for (int t = 0; t < 10; ++t) {
    const Graph g = gen_erdos_renyi(6, 0.5, rng.next_u64());
    const int steps = 1 + static_cast<int>(rng.below(5));
    const Matrix oracle = walk_enumeration_oracle(g, steps);
    if (!oracle.allFinite()) continue;  // some row had no off-diagonal mass
    ASSERT_LE((random_walk_similarity(g, steps).values() - oracle).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RandomWalk, Errors) {
  EXPECT_THROW(random_walk_similarity(complete_graph(3), 0), std::invalid_argument);
  Graph isolated(3);
  isolated.add_edge(0, 1);
  EXPECT_THROW(random_walk_similarity(isolated, 2), DataError);
  // On a single edge an even walk always returns home: no off-diagonal mass.
  EXPECT_THROW(random_walk_similarity(path_graph(2), 2), DataError);
}

TEST(RandomPoints, Properties) {
  const DistanceMatrix a = random_points_distance_matrix(80, 4);
  const DistanceMatrix b = random_points_distance_matrix(80, 4);
  EXPECT_EQ(a.values(), b.values());
  double sum = 0.0;
  for (std::size_t i = 0; i < 80; ++i) {
    EXPECT_EQ(a(i, i), 0.0);
    for (std::size_t j = 0; j < 80; ++j) {
      ASSERT_EQ(a(i, j), a(j, i));
      if (i != j) sum += a(i, j);
    }
  }
  const double mean = sum / (80.0 * 79.0);
  EXPECT_NEAR(mean, std::sqrt(160.0), 0.05 * std::sqrt(160.0));
  EXPECT_THROW(random_points_distance_matrix(1, 0), std::invalid_argument);
}

TEST(MatrixIo, EdgeListRoundTrip) {
  const Graph g = gen_barabasi_albert(30, 2, 8);
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_EQ(read_edge_list(ss), g);
}

TEST(MatrixIo, EdgeListFormatAndErrors) {
  std::istringstream ok("3\n0 1\n1 2\n");
  const Graph g = read_edge_list(ok);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  std::istringstream bad_index("3\n0 5\n");
  EXPECT_ANY_THROW(read_edge_list(bad_index));
  std::istringstream garbage("x\n");
  EXPECT_ANY_THROW(read_edge_list(garbage));
}

TEST(MatrixIo, CsvRoundTripIsExact) {
  const DistanceMatrix D = random_points_distance_matrix(12, 3);
  std::stringstream ss;
  write_matrix_csv(ss, D.values());
  EXPECT_EQ(read_matrix_csv(ss), D.values());
}

TEST(MatrixIo, CsvRejectsMalformed) {
  std::istringstream ragged("0,1\n1\n");
  EXPECT_ANY_THROW(read_matrix_csv(ragged));
  std::istringstream word("0,abc\n1,0\n");
  EXPECT_ANY_THROW(read_matrix_csv(word));
  EXPECT_THROW(load_matrix_csv("/nonexistent/dir/m.csv"), IoError);
  EXPECT_THROW(save_edge_list("/nonexistent/dir/g.txt", Graph(2)), IoError);
}

TEST(MatrixIo, AdjacencyToGraph) {
  Matrix a(3, 3);
  a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  EXPECT_EQ(graph_from_adjacency(a), path_graph(3));
}
