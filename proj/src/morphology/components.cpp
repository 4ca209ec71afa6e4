#include <vector>

#include "ballast/morphology.hpp"

namespace ballast {

ComponentLabels label_components(const BinaryMask& mask) {
  const int width = mask.width();
  ComponentLabels result{LabelMatrix(mask.width(), mask.height(), 0), 0};
  auto& labels = result.labels;
  std::vector<std::size_t> stack;

  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || labels[start] != 0) continue;
    const int id = ++result.count;
    labels[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % static_cast<std::size_t>(width));
      const int y = static_cast<int>(p / static_cast<std::size_t>(width));
      for (const auto& [dx, dy] : kNeighbors8) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (!mask.in_bounds(nx, ny)) continue;
        const std::size_t q = mask.index(nx, ny);
        if (mask[q] && labels[q] == 0) {
          labels[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  return result;
}

BinaryMask remove_small_components(const BinaryMask& mask, int min_area) {
  if (min_area <= 1) return mask;
  const auto comps = label_components(mask);
  std::vector<int> area(static_cast<std::size_t>(comps.count) + 1, 0);
  for (std::int32_t id : comps.labels.pixels()) {
    ++area[static_cast<std::size_t>(id)];
  }
  BinaryMask out(mask.width(), mask.height(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const auto id = static_cast<std::size_t>(comps.labels[i]);
    out[i] = (id != 0 && area[id] >= min_area) ? 1 : 0;
  }
  return out;
}

}  // namespace ballast
