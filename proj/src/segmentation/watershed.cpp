#include <algorithm>
#include <queue>
#include <vector>

#include "ballast/segmentation.hpp"

namespace ballast {

namespace {

struct QueueEntry {
  double level;
  std::uint64_t seq;
  std::size_t index;
};

// Min-heap on (level, seq): lower relief first, earlier insertion wins ties.
struct LaterFirst {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept {
    if (a.level != b.level) return a.level > b.level;
    return a.seq > b.seq;
  }
};

enum class State : std::uint8_t { Unvisited, Queued, Done };

}  // namespace

LabelMatrix watershed(const GrayImage& relief, const MarkerSet& seeds) {
  if (!relief.same_shape(seeds.foreground) || !relief.same_shape(seeds.background)) {
    throw Error(ErrorCode::ShapeMismatch, "watershed: relief and markers differ in shape");
  }
  const int width = relief.width();
  LabelMatrix labels(relief.width(), relief.height(), kRidgeLabel);
  std::vector<State> state(relief.size(), State::Unvisited);

  const ComponentLabels fg = label_components(seeds.foreground);
  bool any_seed = false;
  for (std::size_t i = 0; i < relief.size(); ++i) {
    if (fg.labels[i] != 0) {
      labels[i] = fg.labels[i] + (kFirstParticleLabel - 1);
    } else if (seeds.background[i]) {
      labels[i] = kBackgroundLabel;
    } else {
      continue;
    }
    state[i] = State::Done;
    any_seed = true;
  }
  if (!any_seed) {
    throw Error(ErrorCode::NoSeeds, "watershed called with empty foreground and background markers");
  }

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterFirst> queue;
  std::uint64_t seq = 0;
  auto push_neighbors = [&](std::size_t p, double level) {
    const int x = static_cast<int>(p % static_cast<std::size_t>(width));
    const int y = static_cast<int>(p / static_cast<std::size_t>(width));
    for (const auto& [dx, dy] : kNeighbors8) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (!relief.in_bounds(nx, ny)) continue;
      const std::size_t q = relief.index(nx, ny);
      if (state[q] != State::Unvisited) continue;
      state[q] = State::Queued;
      queue.push({std::max(relief[q], level), seq++, q});
    }
  };

  for (std::size_t i = 0; i < relief.size(); ++i) {
    if (labels[i] != kRidgeLabel) push_neighbors(i, relief[i]);
  }

  while (!queue.empty()) {
    const QueueEntry top = queue.top();
    queue.pop();
    const std::size_t p = top.index;
    const int x = static_cast<int>(p % static_cast<std::size_t>(width));
    const int y = static_cast<int>(p / static_cast<std::size_t>(width));

    std::int32_t found = kRidgeLabel;
    bool conflict = false;
    for (const auto& [dx, dy] : kNeighbors8) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (!relief.in_bounds(nx, ny)) continue;
      const std::size_t q = relief.index(nx, ny);
      if (state[q] != State::Done || labels[q] == kRidgeLabel) continue;
      if (found == kRidgeLabel) {
        found = labels[q];
      } else if (labels[q] != found) {
        conflict = true;
        break;
      }
    }
    state[p] = State::Done;
    if (conflict || found == kRidgeLabel) {
      labels[p] = kRidgeLabel;
      continue;
    }
    labels[p] = found;
    push_neighbors(p, top.level);
  }
  return labels;
}

}  // namespace ballast
