#pragma once

// Embedding losses and the mini-batch SGD (momentum) optimizer that
// approximates their infimum over free point configurations.
//
//   stress  (1/n^2) sum_{i,j} (D_ij - rho(y_i, y_j))^2
//   kl      (1/n)   sum_i sum_{j != i} P_ij log(P_ij / q_ij),
//           q_ij = softmax_{j != i}(-rho(y_i, y_j)^2)
//
// Mini-batches select rows i; a batch loss keeps every j term of its rows.
// Batch gradients are not rescaled, so the batch gradients of one epoch
// partition add up to the full-loss gradient.

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "hilbert/graphs.hpp"
#include "hilbert/manifolds.hpp"

namespace hilbert {

using EmbeddingTarget = std::variant<DistanceMatrix, SimilarityMatrix>;

struct EmbeddingConfig {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int d = 2;
  int n = 0;
  double learning_rate = 0.01;
  int batch_size = 16;
  double momentum = 0.9;
  int max_epochs = 3000;
  /// Stop when the best loss has not improved by min_rel_improvement (relative)
  /// for this many epochs.
  int patience_epochs = 100;
  double min_rel_improvement = 1e-4;
  /// Standard deviation of the Gaussian initial coordinates.
  double init_scale = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct EmbeddingResult {
  /// Best iterate, n x d.
  Matrix Y;
  double final_loss = 0.0;
  /// Full-data loss of Y_0 followed by one entry per epoch.
  std::vector<double> loss_trace;
  int epochs_run = 0;
};

/// Loss values above this count as divergence.
inline constexpr double kDivergenceLoss = 1e12;

double stress_loss(const DistanceMatrix& D, const Matrix& Y, ManifoldKind kind);
double kl_loss(const SimilarityMatrix& P, const Matrix& Y, ManifoldKind kind);
double embedding_loss(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind);

/// Gradient of the loss restricted to `rows` (all j terms of every selected
/// row i). Empty `rows` is not special: it yields a zero gradient.
Matrix stress_loss_gradient(const DistanceMatrix& D, const Matrix& Y, ManifoldKind kind,
                            std::span<const std::size_t> rows);
Matrix kl_loss_gradient(const SimilarityMatrix& P, const Matrix& Y, ManifoldKind kind,
                        std::span<const std::size_t> rows);
Matrix embedding_loss_gradient(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind,
                               std::span<const std::size_t> rows);
/// Gradient of the full loss.
Matrix embedding_loss_gradient(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind);

/// Gaussian Y_0 drawn from config.seed.
Matrix initial_coordinates(const EmbeddingConfig& config);

/// Minimizes the loss matching the target type. Throws DivergenceError.
EmbeddingResult sgd_embed(const EmbeddingConfig& config, const EmbeddingTarget& target);

inline constexpr double kMinSearchLearningRate = 5e-4;
inline constexpr double kMaxSearchLearningRate = 5.0;
inline constexpr int kSearchBatchSizes[] = {16, 32, 48};

struct SearchPoint {
  double learning_rate;
  int batch_size;
};

/// Log-uniform learning rate on [5e-4, 5]; batch size uniform on {16, 32, 48},
/// clipped to n.
SearchPoint sample_search_point(std::uint64_t seed, int n);

struct SearchResult {
  EmbeddingConfig config;
  EmbeddingResult result;
  int diverged_trials = 0;
};

/// Random search over (learning rate, batch size). `base` supplies every other
/// field; its seed is replaced per trial. Throws DivergenceError when every
/// trial diverges.
SearchResult hyperparameter_search(const EmbeddingConfig& base, const EmbeddingTarget& target,
                                   int trials, std::uint64_t seed);

}  // namespace hilbert
