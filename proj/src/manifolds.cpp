#include "hilbert/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hilbert/geometry.hpp"

namespace hilbert {
namespace {

void check_inputs(std::span<const double> u, std::span<const double> w) {
  if (u.size() != w.size()) throw std::invalid_argument("manifold distance: dimension mismatch");
  if (u.empty()) throw std::invalid_argument("manifold distance: dimension must be >= 1");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(w[i])) {
      throw std::invalid_argument("manifold distance: non-finite coordinate");
    }
  }
}

double log_sum_exp(std::span<const double> x) {
  const double top = *std::max_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::exp(v - top);
  return top + std::log(sum);
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

/// Excess t = -<lift(u), lift(w)>_L - 1 >= 0, computed without cancellation as
/// half the Minkowski square norm of the difference.
double hyperboloid_excess(std::span<const double> u, std::span<const double> w, double& u0,
                          double& w0) {
  u0 = std::sqrt(1.0 + squared_norm(u));
  w0 = std::sqrt(1.0 + squared_norm(w));
  double diff_sq = 0.0;
  double diff_dot_sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    diff_sq += (u[i] - w[i]) * (u[i] - w[i]);
    diff_dot_sum += (u[i] - w[i]) * (u[i] + w[i]);
  }
  const double lift_gap = diff_dot_sum / (u0 + w0);
  const double t = 0.5 * (diff_sq - lift_gap * lift_gap);
  return std::max(t, 0.0);
}

double arcosh_one_plus(double t) { return std::log1p(t + std::sqrt(t * (t + 2.0))); }

struct ExtremeIndices {
  std::size_t argmax = 0;
  std::size_t argmin = 0;
  double max = 0.0;
  double min = 0.0;
};

// Lowest index wins ties.
ExtremeIndices difference_extremes(std::span<const double> u, std::span<const double> w) {
  ExtremeIndices e;
  e.max = e.min = u[0] - w[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double diff = u[i] - w[i];
    if (diff > e.max) {
      e.max = diff;
      e.argmax = i;
    }
    if (diff < e.min) {
      e.min = diff;
      e.argmin = i;
    }
  }
  return e;
}

}  // namespace

std::string_view to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::L1: return "l1";
    case ManifoldKind::Hyperboloid: return "hyperboloid";
    case ManifoldKind::HilbertSimplex: return "hilbert";
    case ManifoldKind::FunkSimplex: return "funk";
  }
  return "unknown";
}

std::optional<ManifoldKind> parse_manifold_kind(std::string_view name) {
  for (ManifoldKind kind : kAllManifoldKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

bool is_symmetric(ManifoldKind kind) { return kind != ManifoldKind::FunkSimplex; }

double manifold_distance(ManifoldKind kind, std::span<const double> u, std::span<const double> w) {
  check_inputs(u, w);
  switch (kind) {
    case ManifoldKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - w[i]) * (u[i] - w[i]);
      return std::sqrt(s);
    }
    case ManifoldKind::L1: {
      double s = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - w[i]);
      return s;
    }
    case ManifoldKind::Hyperboloid: {
      double u0, w0;
      return arcosh_one_plus(hyperboloid_excess(u, w, u0, w0));
    }
    case ManifoldKind::HilbertSimplex: {
      const ExtremeIndices e = difference_extremes(u, w);
      return e.max - e.min;
    }
    case ManifoldKind::FunkSimplex: {
      if (u.size() == 1) return 0.0;
      const ExtremeIndices e = difference_extremes(u, w);
      return std::max(0.0, e.max - log_sum_exp(u) + log_sum_exp(w));
    }
  }
  throw std::invalid_argument("manifold distance: unknown kind");
}

double distance_with_grad(ManifoldKind kind, std::span<const double> u, std::span<const double> w,
                          std::span<double> grad_u, std::span<double> grad_w) {
  check_inputs(u, w);
  const std::size_t d = u.size();
  if (grad_u.size() != d || grad_w.size() != d) {
    throw std::invalid_argument("distance_with_grad: gradient buffer size mismatch");
  }
  std::fill(grad_u.begin(), grad_u.end(), 0.0);
  std::fill(grad_w.begin(), grad_w.end(), 0.0);

  switch (kind) {
    case ManifoldKind::Euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += (u[i] - w[i]) * (u[i] - w[i]);
      const double dist = std::sqrt(s);
      if (dist > 0.0) {
        for (std::size_t i = 0; i < d; ++i) {
          grad_u[i] = (u[i] - w[i]) / dist;
          grad_w[i] = -grad_u[i];
        }
      }
      return dist;
    }
    case ManifoldKind::L1: {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = u[i] - w[i];
        s += std::abs(diff);
        const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
        grad_u[i] = sign;
        grad_w[i] = -sign;
      }
      return s;
    }
    case ManifoldKind::Hyperboloid: {
      double u0, w0;
      const double t = hyperboloid_excess(u, w, u0, w0);
      const double dist = arcosh_one_plus(t);
      if (t > kArcoshFloor - 1.0) {
        // d(-<x,y>_L)/du = u * w0 / u0 - w
        const double outer = 1.0 / std::sqrt(t * (t + 2.0));
        for (std::size_t i = 0; i < d; ++i) {
          grad_u[i] = outer * (u[i] * w0 / u0 - w[i]);
          grad_w[i] = outer * (w[i] * u0 / w0 - u[i]);
        }
      }
      return dist;
    }
    case ManifoldKind::HilbertSimplex: {
      const ExtremeIndices e = difference_extremes(u, w);
      grad_u[e.argmax] += 1.0;
      grad_u[e.argmin] -= 1.0;
      grad_w[e.argmax] -= 1.0;
      grad_w[e.argmin] += 1.0;
      return e.max - e.min;
    }
    case ManifoldKind::FunkSimplex: {
      if (d == 1) return 0.0;
      const ExtremeIndices e = difference_extremes(u, w);
      const double lse_u = log_sum_exp(u);
      const double lse_w = log_sum_exp(w);
      for (std::size_t i = 0; i < d; ++i) {
        grad_u[i] = -std::exp(u[i] - lse_u);
        grad_w[i] = std::exp(w[i] - lse_w);
      }
      grad_u[e.argmax] += 1.0;
      grad_w[e.argmax] -= 1.0;
      return std::max(0.0, e.max - lse_u + lse_w);
    }
  }
  throw std::invalid_argument("manifold distance: unknown kind");
}

DistanceGradient manifold_distance_grad(ManifoldKind kind, std::span<const double> u,
                                        std::span<const double> w) {
  DistanceGradient g{std::vector<double>(u.size()), std::vector<double>(u.size())};
  if (u.size() != w.size()) throw std::invalid_argument("manifold distance: dimension mismatch");
  distance_with_grad(kind, u, w, g.wrt_u, g.wrt_w);
  return g;
}

std::vector<double> to_manifold_point(ManifoldKind kind, std::span<const double> u) {
  for (double x : u) {
    if (!std::isfinite(x)) throw std::invalid_argument("to_manifold_point: non-finite input");
  }
  switch (kind) {
    case ManifoldKind::Euclidean:
    case ManifoldKind::L1:
      return std::vector<double>(u.begin(), u.end());
    case ManifoldKind::Hyperboloid: {
      std::vector<double> x;
      x.reserve(u.size() + 1);
      x.push_back(std::sqrt(1.0 + squared_norm(u)));
      x.insert(x.end(), u.begin(), u.end());
      return x;
    }
    case ManifoldKind::HilbertSimplex:
    case ManifoldKind::FunkSimplex: {
      const SimplexPoint p = from_log_coordinates(u);
      return std::vector<double>(p.coords().begin(), p.coords().end());
    }
  }
  throw std::invalid_argument("to_manifold_point: unknown kind");
}

double lorentz_inner(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("lorentz_inner: size mismatch");
  double s = -x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace hilbert
