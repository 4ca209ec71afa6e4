#include <vector>

#include "ballast/morphology.hpp"

namespace ballast {

namespace {

// Flood each 8-connected equal-valued plateau once; a plateau is extremal if
// no exterior neighbor beats it under `beats`.
template <typename Beats>
BinaryMask regional_extrema(const GrayImage& img, Beats beats) {
  const int width = img.width();
  const int height = img.height();
  BinaryMask out(width, height, 0);
  std::vector<std::uint8_t> visited(img.size(), 0);
  std::vector<std::size_t> plateau;
  std::vector<std::size_t> stack;

  for (std::size_t start = 0; start < img.size(); ++start) {
    if (visited[start]) continue;
    const double level = img[start];
    bool extremal = true;
    plateau.clear();
    stack.push_back(start);
    visited[start] = 1;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      plateau.push_back(p);
      const int x = static_cast<int>(p % static_cast<std::size_t>(width));
      const int y = static_cast<int>(p / static_cast<std::size_t>(width));
      for (const auto& [dx, dy] : kNeighbors8) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (!img.in_bounds(nx, ny)) continue;
        const std::size_t q = img.index(nx, ny);
        const double v = img[q];
        if (v == level) {
          if (!visited[q]) {
            visited[q] = 1;
            stack.push_back(q);
          }
        } else if (beats(v, level)) {
          extremal = false;
        }
      }
    }
    if (extremal) {
      for (std::size_t p : plateau) out[p] = 1;
    }
  }
  return out;
}

}  // namespace

BinaryMask regional_maxima(const GrayImage& img) {
  return regional_extrema(img, [](double neighbor, double level) { return neighbor > level; });
}

BinaryMask regional_minima(const GrayImage& img) {
  return regional_extrema(img, [](double neighbor, double level) { return neighbor < level; });
}

}  // namespace ballast
