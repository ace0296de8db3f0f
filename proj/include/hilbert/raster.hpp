#pragma once

// Raster pictures of the 2-simplex: distance fields around a center and
// Voronoi labelings.
//
// The triangle is drawn with unit side in a square image of the same width:
// vertex 0 bottom-left, vertex 1 bottom-right, vertex 2 on top, vertically
// centered. Pixel (row, col) samples its center; row 0 is the top line.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hilbert/geometry.hpp"

namespace hilbert {

inline constexpr int kMinRasterResolution = 16;

enum class FieldDistance { Hilbert, FunkForward, FunkReverse, Aitchison };
enum class VoronoiDistance { Hilbert, Aitchison, VariationNormOnLogRep };

/// Barycentric coordinates of a pixel center, or nullopt outside the open triangle.
std::optional<SimplexPoint> pixel_point(int resolution, int row, int col);

/// Pixel containing a point of the triangle.
struct PixelIndex {
  int row;
  int col;
};
PixelIndex pixel_of(int resolution, const SimplexPoint& p);

struct ScalarField {
  int resolution = 0;
  /// Row-major; NaN outside the triangle.
  std::vector<double> values;
  double max_value = 0.0;

  bool inside(int row, int col) const;
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * resolution + col]; }
};

/// Hilbert: rho_HG(p, c); FunkForward: rho_FD(p, c); FunkReverse: rho_FD(c, p);
/// Aitchison: rho_A(p, c). Throws std::invalid_argument for a bad center.
ScalarField render_distance_field(FieldDistance distance, const SimplexPoint& center, int resolution);

/// Ball radii step, 2 step, ... below the field maximum.
std::vector<double> contour_levels(const ScalarField& field, double step);

/// Binary PGM (P5). Interior pixels are darker the farther they are;
/// outside pixels are white.
void write_pgm(std::ostream& out, const ScalarField& field);

/// Number of corners of the sublevel set {value <= level}: convex hull of the
/// pixel centers, then vertices are dropped while one lies within
/// `tolerance_px` of the chord joining its neighbors.
int count_contour_vertices(const ScalarField& field, double level, double tolerance_px = 1.5);

struct LabelRaster {
  int resolution = 0;
  /// Row-major site indices; -1 outside the triangle.
  std::vector<int> labels;

  int at(int row, int col) const { return labels[static_cast<std::size_t>(row) * resolution + col]; }
};

/// Distances within this of the minimum count as ties (lowest site index wins).
inline constexpr double kVoronoiTieTolerance = 1e-12;

/// Nearest-site labeling. Needs >= 2 distinct sites in the 2-simplex.
LabelRaster render_voronoi(std::span<const SimplexPoint> sites, VoronoiDistance distance, int resolution);

/// Binary PPM (P6) with a fixed 16-color palette (label mod 16); outside is white.
void write_ppm(std::ostream& out, const LabelRaster& raster);

}  // namespace hilbert
