#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ballast/analysis.hpp"

namespace ballast {

namespace {

std::int64_t cross(const PixelPoint& o, const PixelPoint& a, const PixelPoint& b) {
  return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) - static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<PixelPoint> convex_hull(std::vector<PixelPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const PixelPoint& a, const PixelPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  std::vector<PixelPoint> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

HullMeasure measure_hull(std::span<const PixelPoint> points) {
  const auto hull = convex_hull({points.begin(), points.end()});
  HullMeasure m;
  if (hull.size() < 2) return m;
  std::int64_t twice_area = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice_area += static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
    m.boundary_points += std::gcd(std::abs(b.x - a.x), std::abs(b.y - a.y));
  }
  m.area = std::abs(static_cast<double>(twice_area)) / 2.0;
  return m;
}

double convex_hull_area(std::span<const PixelPoint> points) { return measure_hull(points).area; }

double convexity_ratio(double area_px, const HullMeasure& hull) {
  if (hull.area < 1.0) return 1.0;
  const double lattice = hull.area + static_cast<double>(hull.boundary_points) / 2.0 + 1.0;
  return std::min(1.0, area_px / lattice);
}

}  // namespace ballast
