#include "hilbert/raster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hilbert {
namespace {

constexpr double kTriangleHeight = 0.86602540378443864676;  // sqrt(3) / 2
constexpr double kBaseline = 0.5 * (1.0 - kTriangleHeight);

void check_resolution(int resolution) {
  if (resolution < kMinRasterResolution) {
    throw std::invalid_argument("raster resolution must be >= " + std::to_string(kMinRasterResolution));
  }
}

void check_triangle_point(const SimplexPoint& p, const char* what) {
  if (p.size() != 3) throw std::invalid_argument(std::string(what) + " must have 3 coordinates");
}

struct Point2 {
  double x;
  double y;
};

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_chord(const Point2& p, const Point2& a, const Point2& b) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  return std::abs(cross(a, b, p)) / len;
}

constexpr std::array<std::array<unsigned char, 3>, 16> kPalette = {{
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
    {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
    {188, 189, 34}, {23, 190, 207}, {57, 59, 121},  {173, 73, 74},
    {99, 121, 57},  {206, 109, 189}, {140, 162, 82}, {231, 186, 82},
}};

}  // namespace

std::optional<SimplexPoint> pixel_point(int resolution, int row, int col) {
  const double x = (col + 0.5) / resolution;
  const double y = 1.0 - (row + 0.5) / resolution - kBaseline;
  const double x2 = y / kTriangleHeight;
  const double x1 = x - 0.5 * x2;
  const double x0 = 1.0 - x1 - x2;
  if (x0 < kPositivityFloor || x1 < kPositivityFloor || x2 < kPositivityFloor) return std::nullopt;
  return SimplexPoint::normalized({x0, x1, x2});
}

PixelIndex pixel_of(int resolution, const SimplexPoint& p) {
  check_triangle_point(p, "pixel_of point");
  const double x = p[1] + 0.5 * p[2];
  const double y = p[2] * kTriangleHeight + kBaseline;
  const int col = std::clamp(static_cast<int>(std::floor(x * resolution)), 0, resolution - 1);
  const int row = std::clamp(static_cast<int>(std::floor((1.0 - y) * resolution)), 0, resolution - 1);
  return {row, col};
}

bool ScalarField::inside(int row, int col) const { return !std::isnan(at(row, col)); }

ScalarField render_distance_field(FieldDistance distance, const SimplexPoint& center, int resolution) {
  check_resolution(resolution);
  check_triangle_point(center, "center");
  ScalarField field;
  field.resolution = resolution;
  field.values.assign(static_cast<std::size_t>(resolution) * resolution,
                      std::numeric_limits<double>::quiet_NaN());
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const auto p = pixel_point(resolution, row, col);
      if (!p) continue;
      double value = 0.0;
      switch (distance) {
        case FieldDistance::Hilbert: value = hilbert_distance(*p, center); break;
        case FieldDistance::FunkForward: value = funk_distance(*p, center); break;
        case FieldDistance::FunkReverse: value = funk_distance(center, *p); break;
        case FieldDistance::Aitchison: value = aitchison_distance(*p, center); break;
      }
      field.values[static_cast<std::size_t>(row) * resolution + col] = value;
      field.max_value = std::max(field.max_value, value);
    }
  }
  return field;
}

std::vector<double> contour_levels(const ScalarField& field, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("contour_levels: step must be > 0");
  std::vector<double> levels;
  for (int k = 1; k * step < field.max_value; ++k) levels.push_back(k * step);
  return levels;
}

void write_pgm(std::ostream& out, const ScalarField& field) {
  out << "P5\n" << field.resolution << ' ' << field.resolution << "\n255\n";
  const double scale = field.max_value > 0.0 ? 254.0 / field.max_value : 0.0;
  for (double v : field.values) {
    const unsigned char gray =
        std::isnan(v) ? 255 : static_cast<unsigned char>(std::lround(254.0 - scale * v));
    out.put(static_cast<char>(gray));
  }
}

int count_contour_vertices(const ScalarField& field, double level, double tolerance_px) {
  std::vector<Point2> pts;
  for (int row = 0; row < field.resolution; ++row) {
    for (int col = 0; col < field.resolution; ++col) {
      if (field.inside(row, col) && field.at(row, col) <= level) pts.push_back({double(col), double(row)});
    }
  }
  std::vector<Point2> poly = convex_hull(std::move(pts));
  while (poly.size() > 3) {
    std::size_t weakest = 0;
    double weakest_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2& prev = poly[(i + poly.size() - 1) % poly.size()];
      const Point2& next = poly[(i + 1) % poly.size()];
      const double dist = distance_to_chord(poly[i], prev, next);
      if (dist < weakest_dist) {
        weakest_dist = dist;
        weakest = i;
      }
    }
    if (weakest_dist > tolerance_px) break;
    poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(weakest));
  }
  return static_cast<int>(poly.size());
}

LabelRaster render_voronoi(std::span<const SimplexPoint> sites, VoronoiDistance distance, int resolution) {
  check_resolution(resolution);
  if (sites.size() < 2) throw std::invalid_argument("render_voronoi: need at least 2 sites");
  for (std::size_t a = 0; a < sites.size(); ++a) {
    check_triangle_point(sites[a], "site");
    for (std::size_t b = 0; b < a; ++b) {
      if (sites[a] == sites[b]) throw std::invalid_argument("render_voronoi: duplicate sites");
    }
  }
  std::vector<LogRepPoint> site_logs;
  site_logs.reserve(sites.size());
  for (const SimplexPoint& s : sites) site_logs.push_back(to_log_coordinates(s));

  LabelRaster raster;
  raster.resolution = resolution;
  raster.labels.assign(static_cast<std::size_t>(resolution) * resolution, -1);
  std::vector<double> dist(sites.size());
  std::vector<double> diff(3);
  for (int row = 0; row < resolution; ++row) {
    for (int col = 0; col < resolution; ++col) {
      const auto p = pixel_point(resolution, row, col);
      if (!p) continue;
      const LogRepPoint v = to_log_coordinates(*p);
      for (std::size_t s = 0; s < sites.size(); ++s) {
        switch (distance) {
          case VoronoiDistance::Hilbert: dist[s] = hilbert_distance(*p, sites[s]); break;
          case VoronoiDistance::Aitchison: dist[s] = aitchison_distance(*p, sites[s]); break;
          case VoronoiDistance::VariationNormOnLogRep:
            for (std::size_t k = 0; k < 3; ++k) diff[k] = v[k] - site_logs[s][k];
            dist[s] = variation_norm(diff);
            break;
        }
      }
      const double best = *std::min_element(dist.begin(), dist.end());
      int label = 0;
      while (dist[static_cast<std::size_t>(label)] > best + kVoronoiTieTolerance) ++label;
      raster.labels[static_cast<std::size_t>(row) * resolution + col] = label;
    }
  }
  return raster;
}

void write_ppm(std::ostream& out, const LabelRaster& raster) {
  out << "P6\n" << raster.resolution << ' ' << raster.resolution << "\n255\n";
  for (int label : raster.labels) {
    if (label < 0) {
      out.put(static_cast<char>(255)).put(static_cast<char>(255)).put(static_cast<char>(255));
    } else {
      const auto& c = kPalette[static_cast<std::size_t>(label) % kPalette.size()];
      out.put(static_cast<char>(c[0])).put(static_cast<char>(c[1])).put(static_cast<char>(c[2]));
    }
  }
}

}  // namespace hilbert
