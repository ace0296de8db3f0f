#pragma once

// Embedding geometries behind a common unconstrained parametrization.
//
// Every kind is parametrized by a free vector u in R^d:
//   Euclidean, L1     u itself
//   Hyperboloid       lift (sqrt(1 + |u|^2), u) onto the Minkowski hyperboloid
//   HilbertSimplex    softmax(u) in the simplex with d coordinates
//   FunkSimplex       softmax(u), with the (asymmetric) Funk distance
//
// The simplex kinds carry one redundant degree of freedom: u and u + c*1
// name the same point.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hilbert {

enum class ManifoldKind { Euclidean, L1, Hyperboloid, HilbertSimplex, FunkSimplex };

inline constexpr std::array<ManifoldKind, 5> kAllManifoldKinds = {
    ManifoldKind::Euclidean, ManifoldKind::L1, ManifoldKind::Hyperboloid,
    ManifoldKind::HilbertSimplex, ManifoldKind::FunkSimplex};

/// Short lowercase name: euclidean, l1, hyperboloid, hilbert, funk.
std::string_view to_string(ManifoldKind kind);
std::optional<ManifoldKind> parse_manifold_kind(std::string_view name);

/// Whether rho(u, w) == rho(w, u) for this kind.
bool is_symmetric(ManifoldKind kind);

/// Below this arcosh argument the hyperboloid gradient is taken as 0; arcosh
/// has a 1/sqrt singularity at 1.
inline constexpr double kArcoshFloor = 1.0 + 1e-15;

double manifold_distance(ManifoldKind kind, std::span<const double> u, std::span<const double> w);

struct DistanceGradient {
  std::vector<double> wrt_u;
  std::vector<double> wrt_w;
};

/// Analytic (sub)gradient of manifold_distance. Ties in max/min/sign pick the
/// lowest index; the Euclidean and hyperboloid gradients at u == w are 0.
DistanceGradient manifold_distance_grad(ManifoldKind kind, std::span<const double> u,
                                        std::span<const double> w);

/// Writes d rho / du and d rho / dw into the given buffers (length d each)
/// and returns rho. Allocation-free variant used by the optimizer.
double distance_with_grad(ManifoldKind kind, std::span<const double> u, std::span<const double> w,
                          std::span<double> grad_u, std::span<double> grad_w);

/// The point u names on the manifold: u itself, softmax(u), or the
/// hyperboloid lift (d + 1 coordinates).
std::vector<double> to_manifold_point(ManifoldKind kind, std::span<const double> u);

/// Lorentz inner product -x0 y0 + sum_i xi yi.
double lorentz_inner(std::span<const double> x, std::span<const double> y);

}  // namespace hilbert
