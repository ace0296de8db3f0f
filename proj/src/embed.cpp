#include "hilbert/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hilbert/errors.hpp"
#include "hilbert/random.hpp"

namespace hilbert {
namespace {

std::span<const double> row_of(const Matrix& Y, std::size_t i) {
  return {Y.data() + i * static_cast<std::size_t>(Y.cols()), static_cast<std::size_t>(Y.cols())};
}

std::span<double> row_of(Matrix& Y, std::size_t i) {
  return {Y.data() + i * static_cast<std::size_t>(Y.cols()), static_cast<std::size_t>(Y.cols())};
}

void check_shapes(std::size_t target_size, const Matrix& Y, const char* op) {
  if (static_cast<std::size_t>(Y.rows()) != target_size) {
    throw std::invalid_argument(std::string(op) + ": target is " + std::to_string(target_size) +
                                "x" + std::to_string(target_size) + " but Y has " +
                                std::to_string(Y.rows()) + " rows");
  }
  if (Y.cols() < 1) throw std::invalid_argument(std::string(op) + ": Y needs at least one column");
}

void check_rows(std::span<const std::size_t> rows, std::size_t n) {
  for (std::size_t i : rows) {
    if (i >= n) throw std::invalid_argument("loss gradient: row index out of range");
  }
}

/// log q_ij for j != i (entry i is left untouched). Throws when q_ij
/// underflows to 0 on a pair with positive target mass.
void log_similarities(const SimilarityMatrix& P, const Matrix& Y, ManifoldKind kind, std::size_t i,
                      std::vector<double>& sq_dist, std::vector<double>& log_q) {
  const std::size_t n = P.size();
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double rho = manifold_distance(kind, row_of(Y, i), row_of(Y, j));
    sq_dist[j] = rho * rho;
    top = std::max(top, -sq_dist[j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) sum += std::exp(-sq_dist[j] - top);
  }
  const double log_norm = top + std::log(sum);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    log_q[j] = -sq_dist[j] - log_norm;
    if (P(i, j) > 0.0 && std::exp(log_q[j]) == 0.0) {
      throw DivergenceError("kl_loss: q_" + std::to_string(i) + std::to_string(j) +
                                " underflows to 0 where P is positive (divergence overflow)",
                            -1, 0.0);
    }
  }
}

}  // namespace

void EmbeddingConfig::validate() const {
  if (d < 1) throw std::invalid_argument("EmbeddingConfig: d must be >= 1");
  if (n < 2) throw std::invalid_argument("EmbeddingConfig: n must be >= 2");
  if (batch_size < 1 || batch_size > n) throw std::invalid_argument("EmbeddingConfig: batch_size must be in [1, n]");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("EmbeddingConfig: momentum must be in [0, 1)");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("EmbeddingConfig: learning_rate must be finite and >= 0");
  }
  if (max_epochs < 0) throw std::invalid_argument("EmbeddingConfig: max_epochs must be >= 0");
  if (patience_epochs < 1) throw std::invalid_argument("EmbeddingConfig: patience_epochs must be >= 1");
  if (!(min_rel_improvement >= 0.0)) throw std::invalid_argument("EmbeddingConfig: min_rel_improvement must be >= 0");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw std::invalid_argument("EmbeddingConfig: init_scale must be > 0");
}

double stress_loss(const DistanceMatrix& D, const Matrix& Y, ManifoldKind kind) {
  check_shapes(D.size(), Y, "stress_loss");
  const std::size_t n = D.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double rho = i == j ? 0.0 : manifold_distance(kind, row_of(Y, i), row_of(Y, j));
      const double residual = D(i, j) - rho;
      sum += residual * residual;
    }
  }
  return sum / static_cast<double>(n * n);
}

double kl_loss(const SimilarityMatrix& P, const Matrix& Y, ManifoldKind kind) {
  check_shapes(P.size(), Y, "kl_loss");
  const std::size_t n = P.size();
  std::vector<double> sq_dist(n), log_q(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    log_similarities(P, Y, kind, i, sq_dist, log_q);
    for (std::size_t j = 0; j < n; ++j) {
      const double p = P(i, j);
      if (j == i || p == 0.0) continue;
      sum += p * (std::log(p) - log_q[j]);
    }
  }
  return sum / static_cast<double>(n);
}

double embedding_loss(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind) {
  return std::visit(
      [&](const auto& t) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, DistanceMatrix>) {
          return stress_loss(t, Y, kind);
        } else {
          return kl_loss(t, Y, kind);
        }
      },
      target);
}

Matrix stress_loss_gradient(const DistanceMatrix& D, const Matrix& Y, ManifoldKind kind,
                            std::span<const std::size_t> rows) {
  check_shapes(D.size(), Y, "stress_loss_gradient");
  const std::size_t n = D.size();
  check_rows(rows, n);
  const auto d = static_cast<std::size_t>(Y.cols());
  Matrix grad = Matrix::Zero(Y.rows(), Y.cols());
  std::vector<double> gu(d), gw(d);
  const double norm = 2.0 / static_cast<double>(n * n);
  for (std::size_t i : rows) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double rho = distance_with_grad(kind, row_of(Y, i), row_of(Y, j), gu, gw);
      const double coeff = norm * (rho - D(i, j));
      auto gi = row_of(grad, i);
      auto gj = row_of(grad, j);
      for (std::size_t k = 0; k < d; ++k) {
        gi[k] += coeff * gu[k];
        gj[k] += coeff * gw[k];
      }
    }
  }
  return grad;
}

Matrix kl_loss_gradient(const SimilarityMatrix& P, const Matrix& Y, ManifoldKind kind,
                        std::span<const std::size_t> rows) {
  check_shapes(P.size(), Y, "kl_loss_gradient");
  const std::size_t n = P.size();
  check_rows(rows, n);
  const auto d = static_cast<std::size_t>(Y.cols());
  Matrix grad = Matrix::Zero(Y.rows(), Y.cols());
  std::vector<double> gu(d), gw(d), sq_dist(n), log_q(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i : rows) {
    log_similarities(P, Y, kind, i, sq_dist, log_q);
    double row_mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row_mass += P(i, j);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      // dL/d(rho^2) = (P_ij - q_ij * row_mass) / n; d(rho^2) = 2 rho d(rho)
      const double dl_dsq = inv_n * (P(i, j) - std::exp(log_q[j]) * row_mass);
      const double rho = distance_with_grad(kind, row_of(Y, i), row_of(Y, j), gu, gw);
      const double coeff = dl_dsq * 2.0 * rho;
      auto gi = row_of(grad, i);
      auto gj = row_of(grad, j);
      for (std::size_t k = 0; k < d; ++k) {
        gi[k] += coeff * gu[k];
        gj[k] += coeff * gw[k];
      }
    }
  }
  return grad;
}

Matrix embedding_loss_gradient(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind,
                               std::span<const std::size_t> rows) {
  return std::visit(
      [&](const auto& t) -> Matrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, DistanceMatrix>) {
          return stress_loss_gradient(t, Y, kind, rows);
        } else {
          return kl_loss_gradient(t, Y, kind, rows);
        }
      },
      target);
}

Matrix embedding_loss_gradient(const EmbeddingTarget& target, const Matrix& Y, ManifoldKind kind) {
  std::vector<std::size_t> all(static_cast<std::size_t>(Y.rows()));
  std::iota(all.begin(), all.end(), std::size_t{0});
  return embedding_loss_gradient(target, Y, kind, all);
}

Matrix initial_coordinates(const EmbeddingConfig& config) {
  Rng rng(derive_seed(config.seed, 0));
  Matrix Y(config.n, config.d);
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    for (Eigen::Index k = 0; k < Y.cols(); ++k) Y(i, k) = config.init_scale * rng.gaussian();
  }
  return Y;
}

EmbeddingResult sgd_embed(const EmbeddingConfig& config, const EmbeddingTarget& target) {
  config.validate();
  const std::size_t n = std::visit([](const auto& t) { return t.size(); }, target);
  if (n != static_cast<std::size_t>(config.n)) {
    throw std::invalid_argument("sgd_embed: config.n does not match the target size");
  }

  auto checked_loss = [&](const Matrix& Y, int epoch) {
    double loss;
    try {
      loss = embedding_loss(target, Y, config.kind);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " at epoch " + std::to_string(epoch) +
                                " with lr " + std::to_string(config.learning_rate),
                            epoch, config.learning_rate);
    } catch (const std::invalid_argument& e) {
      // Non-finite coordinates surface here.
      throw DivergenceError(std::string("sgd_embed: ") + e.what() + " at epoch " +
                                std::to_string(epoch) + " with lr " +
                                std::to_string(config.learning_rate),
                            epoch, config.learning_rate);
    }
    if (!std::isfinite(loss) || loss > kDivergenceLoss) {
      throw DivergenceError("sgd_embed: loss " + std::to_string(loss) + " diverged at epoch " +
                                std::to_string(epoch) + " with lr " +
                                std::to_string(config.learning_rate),
                            epoch, config.learning_rate);
    }
    return loss;
  };

  EmbeddingResult result;
  Matrix Y = initial_coordinates(config);
  Matrix velocity = Matrix::Zero(Y.rows(), Y.cols());
  double loss = checked_loss(Y, 0);
  result.loss_trace.push_back(loss);
  result.Y = Y;
  result.final_loss = loss;

  Rng shuffle_rng(derive_seed(config.seed, 1));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(config.batch_size);

  double reference = loss;
  int last_improvement = 0;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::span<const std::size_t> rows(order.data() + start, std::min(batch, n - start));
      Matrix grad;
      try {
        grad = embedding_loss_gradient(target, Y, config.kind, rows);
      } catch (const std::exception& e) {
        throw DivergenceError(std::string("sgd_embed: gradient failed at epoch ") +
                                  std::to_string(epoch) + " with lr " +
                                  std::to_string(config.learning_rate) + ": " + e.what(),
                              epoch, config.learning_rate);
      }
      velocity = config.momentum * velocity - config.learning_rate * grad;
      Y += velocity;
    }
    loss = checked_loss(Y, epoch);
    result.loss_trace.push_back(loss);
    result.epochs_run = epoch;
    if (loss < result.final_loss) {
      result.final_loss = loss;
      result.Y = Y;
    }
    if (result.final_loss < reference * (1.0 - config.min_rel_improvement)) {
      reference = result.final_loss;
      last_improvement = epoch;
    }
    if (epoch - last_improvement >= config.patience_epochs) break;
  }
  return result;
}

SearchPoint sample_search_point(std::uint64_t seed, int n) {
  Rng rng(seed);
  const double log_lr = rng.uniform(std::log(kMinSearchLearningRate), std::log(kMaxSearchLearningRate));
  const int batch = kSearchBatchSizes[rng.below(std::size(kSearchBatchSizes))];
  return {std::exp(log_lr), std::min(batch, n)};
}

SearchResult hyperparameter_search(const EmbeddingConfig& base, const EmbeddingTarget& target,
                                   int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("hyperparameter_search: trials must be >= 1");
  SearchResult best;
  bool have_best = false;
  std::string last_error;
  for (int t = 0; t < trials; ++t) {
    const auto trial = static_cast<std::uint64_t>(t);
    const SearchPoint point = sample_search_point(derive_seed(seed, 2 * trial), base.n);
    EmbeddingConfig config = base;
    config.learning_rate = point.learning_rate;
    config.batch_size = point.batch_size;
    config.seed = derive_seed(seed, 2 * trial + 1);
    try {
      EmbeddingResult result = sgd_embed(config, target);
      if (!have_best || result.final_loss < best.result.final_loss) {
        best.config = config;
        best.result = std::move(result);
        have_best = true;
      }
    } catch (const DivergenceError& e) {
      ++best.diverged_trials;
      last_error = e.what();
    }
  }
  if (!have_best) {
    throw DivergenceError("hyperparameter_search: all " + std::to_string(trials) +
                              " trials diverged; last: " + last_error,
                          -1, 0.0);
  }
  return best;
}

}  // namespace hilbert
