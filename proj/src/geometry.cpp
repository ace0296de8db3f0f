#include "hilbert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hilbert {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
  if (a < 2) throw std::invalid_argument(std::string(op) + ": need at least 2 coordinates");
}

struct RatioRange {
  double max;
  double min;
};

RatioRange ratio_range(std::span<const double> p, std::span<const double> q) {
  RatioRange r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ratio = p[i] / q[i];
    r.max = std::max(r.max, ratio);
    r.min = std::min(r.min, ratio);
  }
  return r;
}

bool coordinatewise_equal(std::span<const double> p, std::span<const double> q) {
  return std::equal(p.begin(), p.end(), q.begin(), q.end());
}

}  // namespace

PositiveVector::PositiveVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("PositiveVector: empty");
  for (double x : coords_) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("PositiveVector: coordinates must be finite and > 0");
    }
  }
}

PositiveVector PositiveVector::scaled(double factor) const {
  std::vector<double> out(coords_);
  for (double& x : out) x *= factor;
  return PositiveVector(std::move(out));
}

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("SimplexPoint: empty");
  double sum = 0.0;
  for (double x : coords_) {
    if (!std::isfinite(x) || x < kPositivityFloor) {
      throw std::invalid_argument("SimplexPoint: coordinate below positivity floor 1e-12");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("SimplexPoint: coordinates sum to " + std::to_string(sum));
  }
}

SimplexPoint SimplexPoint::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SimplexPoint::normalized: weights must be finite and > 0");
    }
    sum += w;
  }
  for (double& w : weights) w /= sum;
  return SimplexPoint(std::move(weights));
}

SimplexPoint SimplexPoint::uniform(std::size_t size) {
  return SimplexPoint(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

LogRepPoint::LogRepPoint(std::vector<double> v) : v_(std::move(v)) {
  if (v_.empty()) throw std::invalid_argument("LogRepPoint: empty");
  double sum = 0.0;
  double scale = 1.0;
  for (double x : v_) {
    if (!std::isfinite(x)) throw std::invalid_argument("LogRepPoint: non-finite coordinate");
    sum += x;
    scale = std::max(scale, std::abs(x));
  }
  if (std::abs(sum) > kSumTolerance * scale) {
    throw std::invalid_argument("LogRepPoint: coordinates must sum to 0");
  }
}

PartitionSpec::PartitionSpec(std::vector<std::vector<std::size_t>> blocks, std::size_t size)
    : blocks_(std::move(blocks)), size_(size) {
  if (blocks_.empty() || blocks_.size() > size_) {
    throw std::invalid_argument("PartitionSpec: block count must be in [1, size]");
  }
  std::vector<bool> seen(size_, false);
  std::size_t covered = 0;
  for (const auto& block : blocks_) {
    if (block.empty()) throw std::invalid_argument("PartitionSpec: empty block");
    for (std::size_t idx : block) {
      if (idx >= size_) throw std::invalid_argument("PartitionSpec: index out of range");
      if (seen[idx]) throw std::invalid_argument("PartitionSpec: blocks overlap");
      seen[idx] = true;
      ++covered;
    }
  }
  if (covered != size_) throw std::invalid_argument("PartitionSpec: blocks do not cover all indices");
}

PartitionSpec PartitionSpec::identity(std::size_t size) {
  std::vector<std::vector<std::size_t>> blocks(size);
  for (std::size_t i = 0; i < size; ++i) blocks[i] = {i};
  return PartitionSpec(std::move(blocks), size);
}

double funk_distance(const PositiveVector& p, const PositiveVector& q) {
  require_same_size(p.size(), q.size(), "funk_distance");
  if (coordinatewise_equal(p.coords(), q.coords())) return 0.0;
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) max_ratio = std::max(max_ratio, p[i] / q[i]);
  return std::log(max_ratio);
}

double hilbert_distance(const PositiveVector& p, const PositiveVector& q) {
  require_same_size(p.size(), q.size(), "hilbert_distance");
  if (coordinatewise_equal(p.coords(), q.coords())) return 0.0;
  const RatioRange r = ratio_range(p.coords(), q.coords());
  return std::log(r.max / r.min);
}

double cross_ratio_oracle(const SimplexPoint& p, const SimplexPoint& q) {
  require_same_size(p.size(), q.size(), "cross_ratio_oracle");
  if (p == q) return 0.0;
  // x(t) = (1-t) p + t q; facet i is hit where x_i(t) = 0, i.e. t = p_i / (p_i - q_i).
  // Exits beyond q have t > 1, exits behind p have t < 0.
  double t_far = std::numeric_limits<double>::infinity();
  double t_near = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double slope = q[i] - p[i];
    if (std::abs(slope) <= 1e-14) continue;
    const double t = p[i] / (p[i] - q[i]);
    if (t > 1.0) t_far = std::min(t_far, t);
    if (t < 0.0) t_near = std::max(t_near, t);
  }
  if (!std::isfinite(t_far) || !std::isfinite(t_near)) {
    throw std::domain_error("cross_ratio_oracle: line does not leave the simplex on both sides");
  }
  // Collinear order p_bar(t_near), p(0), q(1), q_bar(t_far).
  const double cross_ratio = (t_far * (1.0 - t_near)) / ((-t_near) * (t_far - 1.0));
  return std::log(cross_ratio);
}

double variation_norm(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("variation_norm: empty vector");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

LogRepPoint to_log_coordinates(const SimplexPoint& p) {
  std::vector<double> v(p.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    v[i] = std::log(p[i]);
    mean += v[i];
  }
  mean /= static_cast<double>(p.size());
  for (double& x : v) x -= mean;
  return LogRepPoint(std::move(v));
}

SimplexPoint from_log_coordinates(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("from_log_coordinates: empty vector");
  double top = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("from_log_coordinates: non-finite input");
    top = std::max(top, x);
  }
  std::vector<double> p(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    p[i] = std::exp(v[i] - top);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  for (double x : p) {
    if (x < kPositivityFloor) {
      throw std::domain_error("from_log_coordinates: coordinate spread too large, point leaves the simplex floor");
    }
  }
  return SimplexPoint(std::move(p));
}

double aitchison_distance(const SimplexPoint& p, const SimplexPoint& q) {
  require_same_size(p.size(), q.size(), "aitchison_distance");
  const LogRepPoint vp = to_log_coordinates(p);
  const LogRepPoint vq = to_log_coordinates(q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = vp[i] - vq[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double lse_funk_upper(const PositiveVector& p, const PositiveVector& q) {
  require_same_size(p.size(), q.size(), "lse_funk_upper");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] / q[i];
  return std::log(sum);
}

double lse_hilbert_surrogate(const PositiveVector& p, const PositiveVector& q) {
  require_same_size(p.size(), q.size(), "lse_hilbert_surrogate");
  double forward = 0.0;
  double reverse = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    forward += p[i] / q[i];
    reverse += q[i] / p[i];
  }
  return std::log(forward) + std::log(reverse);
}

SimplexPoint coarse_grain(const SimplexPoint& p, const PartitionSpec& partition) {
  if (partition.size() != p.size()) {
    throw std::invalid_argument("coarse_grain: partition size does not match point length");
  }
  std::vector<double> merged;
  merged.reserve(partition.block_count());
  for (const auto& block : partition.blocks()) {
    double sum = 0.0;
    for (std::size_t idx : block) sum += p[idx];
    merged.push_back(sum);
  }
  return SimplexPoint(std::move(merged));
}

}  // namespace hilbert
