#pragma once

// Funk and Hilbert geometry of the open probability simplex.
//
// Points of the simplex are stored as their d+1 barycentric coordinates.
// Funk/Hilbert distances only depend on coordinate ratios, so they are
// defined on the positive orthant (unnormalized representatives); the
// Hilbert distance is additionally projective in both arguments.

#include <cstddef>
#include <span>
#include <vector>

namespace hilbert {

/// Smallest admissible simplex coordinate. Smaller inputs are rejected.
inline constexpr double kPositivityFloor = 1e-12;
/// Allowed deviation of the coordinate sum from 1 (and of LogRepPoint sums from 0).
inline constexpr double kSumTolerance = 1e-9;

/// Strictly positive vector; a representative of a ray of the positive cone.
class PositiveVector {
public:
  explicit PositiveVector(std::vector<double> coords);

  std::span<const double> coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Multiplies every coordinate by `factor` (> 0).
  PositiveVector scaled(double factor) const;

private:
  std::vector<double> coords_;
};

/// Point of the open simplex: coordinates >= kPositivityFloor summing to 1.
class SimplexPoint {
public:
  explicit SimplexPoint(std::vector<double> coords);

  /// Divides by the coordinate sum before validating.
  static SimplexPoint normalized(std::vector<double> weights);
  static SimplexPoint uniform(std::size_t size);

  std::span<const double> coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  operator PositiveVector() const { return PositiveVector(coords_); }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
  std::vector<double> coords_;
};

/// Zero-sum vector; the log-ratio image of a simplex point.
class LogRepPoint {
public:
  explicit LogRepPoint(std::vector<double> v);

  std::span<const double> coords() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }

private:
  std::vector<double> v_;
};

/// Partition of {0, ..., size-1} into nonempty disjoint blocks.
/// Block order is kept as given; it fixes the coordinate order after merging.
class PartitionSpec {
public:
  PartitionSpec(std::vector<std::vector<std::size_t>> blocks, std::size_t size);

  static PartitionSpec identity(std::size_t size);

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t size() const { return size_; }
  std::size_t block_count() const { return blocks_.size(); }

private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::size_t size_;
};

/// log max_i p_i/q_i. Asymmetric; nonnegative when p and q lie on the simplex.
double funk_distance(const PositiveVector& p, const PositiveVector& q);

/// log(max_i p_i/q_i / min_i p_i/q_i). Invariant to rescaling either argument.
double hilbert_distance(const PositiveVector& p, const PositiveVector& q);

/// Hilbert distance from its definition as a log cross-ratio: intersects the
/// line through p and q with every facet {x_i = 0} and takes the nearest hit
/// on each side. Independent of the closed form above; O(d).
double cross_ratio_oracle(const SimplexPoint& p, const SimplexPoint& q);

/// max_i x_i - min_i x_i.
double variation_norm(std::span<const double> x);

/// v_i = log p_i - mean_j log p_j.
LogRepPoint to_log_coordinates(const SimplexPoint& p);

/// Softmax of v. Accepts any finite vector: adding a constant to every entry
/// does not change the result.
SimplexPoint from_log_coordinates(std::span<const double> v);
inline SimplexPoint from_log_coordinates(const LogRepPoint& v) {
  return from_log_coordinates(v.coords());
}

/// Euclidean distance between centered log-ratio representations.
double aitchison_distance(const SimplexPoint& p, const SimplexPoint& q);

/// log sum_i p_i/q_i. Sits in [funk, funk + log d].
double lse_funk_upper(const PositiveVector& p, const PositiveVector& q);

/// log((sum_i p_i/q_i)(sum_i q_i/p_i)). Smooth and symmetric; sits in
/// [hilbert, hilbert + 2 log d] and equals 2 log d on the diagonal.
double lse_hilbert_surrogate(const PositiveVector& p, const PositiveVector& q);

/// Block sums of p, one coordinate per block.
SimplexPoint coarse_grain(const SimplexPoint& p, const PartitionSpec& partition);

}  // namespace hilbert
