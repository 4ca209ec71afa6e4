#include "ballast/reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace ballast::reference {

namespace {

double gauss(double d, double sigma) { return std::exp(-(d * d) / (2.0 * sigma * sigma)); }

template <typename T, typename Pick>
Image<T> disk_extreme(const Image<T>& img, int radius, Pick pick) {
  Image<T> out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      T best = img(x, y);
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          if (!img.in_bounds(x + dx, y + dy)) continue;
          best = pick(best, img(x + dx, y + dy));
        }
      }
      out(x, y) = best;
    }
  }
  return out;
}

long long cross(const PixelPoint& o, const PixelPoint& a, const PixelPoint& b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

std::vector<PixelPoint> brute_hull_vertices(std::vector<PixelPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<PixelPoint> verts;
  std::vector<bool> used(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      bool supporting = true;
      for (std::size_t k = 0; k < pts.size() && supporting; ++k) {
        if (cross(pts[i], pts[j], pts[k]) < 0) supporting = false;
      }
      if (supporting) {
        used[i] = true;
        used[j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) verts.push_back(pts[i]);
  }
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : verts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(std::max<std::size_t>(verts.size(), 1));
  cy /= static_cast<double>(std::max<std::size_t>(verts.size(), 1));
  std::sort(verts.begin(), verts.end(), [&](const PixelPoint& a, const PixelPoint& b) {
    return std::atan2(a.y - cy, a.x - cx) < std::atan2(b.y - cy, b.x - cx);
  });
  return verts;
}

}  // namespace

GrayImage bilateral(const GrayImage& img, double sigma_s, double sigma_r) {
  const int radius = static_cast<int>(std::ceil(2.0 * sigma_s));
  const double sr = sigma_r / 255.0;
  GrayImage out(img.width(), img.height());
  for (int py = 0; py < img.height(); ++py) {
    for (int px = 0; px < img.width(); ++px) {
      double num = 0.0;
      double wp = 0.0;
      for (int qy = py - radius; qy <= py + radius; ++qy) {
        for (int qx = px - radius; qx <= px + radius; ++qx) {
          if (!img.in_bounds(qx, qy)) continue;
          const double dist = std::hypot(static_cast<double>(px - qx), static_cast<double>(py - qy));
          const double w = gauss(dist, sigma_s) * gauss(std::abs(img(px, py) - img(qx, qy)), sr);
          num += w * img(qx, qy);
          wp += w;
        }
      }
      out(px, py) = num / wp;
    }
  }
  return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma_s) {
  const int radius = static_cast<int>(std::ceil(2.0 * sigma_s));
  GrayImage out(img.width(), img.height());
  for (int py = 0; py < img.height(); ++py) {
    for (int px = 0; px < img.width(); ++px) {
      double num = 0.0;
      double wp = 0.0;
      for (int qy = py - radius; qy <= py + radius; ++qy) {
        for (int qx = px - radius; qx <= px + radius; ++qx) {
          if (!img.in_bounds(qx, qy)) continue;
          const double w = gauss(std::hypot(static_cast<double>(px - qx), static_cast<double>(py - qy)), sigma_s);
          num += w * img(qx, qy);
          wp += w;
        }
      }
      out(px, py) = num / wp;
    }
  }
  return out;
}

GrayImage erode(const GrayImage& img, int radius) {
  return disk_extreme(img, radius, [](double a, double b) { return std::min(a, b); });
}

GrayImage dilate(const GrayImage& img, int radius) {
  return disk_extreme(img, radius, [](double a, double b) { return std::max(a, b); });
}

BinaryMask erode(const BinaryMask& img, int radius) {
  return disk_extreme(img, radius, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
}

BinaryMask dilate(const BinaryMask& img, int radius) {
  return disk_extreme(img, radius, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask) {
  GrayImage cur = marker;
  while (true) {
    GrayImage next(cur.width(), cur.height());
    for (int y = 0; y < cur.height(); ++y) {
      for (int x = 0; x < cur.width(); ++x) {
        double m = cur(x, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (cur.in_bounds(x + dx, y + dy)) m = std::max(m, cur(x + dx, y + dy));
          }
        }
        next(x, y) = std::min(m, mask(x, y));
      }
    }
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

GrayImage sobel(const GrayImage& img) {
  static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double gx = 0.0;
      double gy = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          const int sx = std::clamp(x + i - 1, 0, img.width() - 1);
          const int sy = std::clamp(y + j - 1, 0, img.height() - 1);
          gx += kx[j][i] * img(sx, sy);
          gy += ky[j][i] * img(sx, sy);
        }
      }
      out(x, y) = std::sqrt(gx * gx + gy * gy) / 8.0;
    }
  }
  return out;
}

BinaryMask regional_maxima(const GrayImage& img) {
  BinaryMask cand(img.width(), img.height(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (!cand(x, y)) continue;
        for (int dy = -1; dy <= 1 && cand(x, y); ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || !img.in_bounds(x + dx, y + dy)) continue;
            const double v = img(x + dx, y + dy);
            if (v > img(x, y) || (v == img(x, y) && !cand(x + dx, y + dy))) {
              cand(x, y) = 0;
              changed = true;
              break;
            }
          }
        }
      }
    }
  }
  return cand;
}

int count_components(const BinaryMask& mask) {
  std::vector<std::size_t> parent(mask.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (mask.in_bounds(x + dx, y + dy) && mask(x + dx, y + dy)) {
            parent[find(mask.index(x, y))] = find(mask.index(x + dx, y + dy));
          }
        }
      }
    }
  }
  int roots = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && find(i) == i) ++roots;
  }
  return roots;
}

bool is_connected(const LabelMatrix& labels, std::int32_t label) {
  std::size_t total = 0;
  std::size_t first = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) {
      ++total;
      if (first == labels.size()) first = i;
    }
  }
  if (total == 0) return true;
  std::vector<bool> seen(labels.size(), false);
  std::deque<std::size_t> queue{first};
  seen[first] = true;
  std::size_t reached = 0;
  const int w = labels.width();
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    ++reached;
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (!labels.in_bounds(x + dx, y + dy)) continue;
        const std::size_t q = labels.index(x + dx, y + dy);
        if (!seen[q] && labels[q] == label) {
          seen[q] = true;
          queue.push_back(q);
        }
      }
    }
  }
  return reached == total;
}

GrayImage distance(const BinaryMask& features) {
  GrayImage out(features.width(), features.height(), std::numeric_limits<double>::infinity());
  for (int y = 0; y < features.height(); ++y) {
    for (int x = 0; x < features.width(); ++x) {
      for (int fy = 0; fy < features.height(); ++fy) {
        for (int fx = 0; fx < features.width(); ++fx) {
          if (features(fx, fy)) {
            out(x, y) = std::min(out(x, y), std::hypot(static_cast<double>(x - fx), static_cast<double>(y - fy)));
          }
        }
      }
    }
  }
  return out;
}

double hull_area(const std::vector<PixelPoint>& points) {
  const auto verts = brute_hull_vertices(points);
  double twice = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto& a = verts[i];
    const auto& b = verts[(i + 1) % verts.size()];
    twice += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
  }
  return std::abs(twice) / 2.0;
}

long hull_lattice_count(const std::vector<PixelPoint>& points) {
  const auto verts = brute_hull_vertices(points);
  int x0 = std::numeric_limits<int>::max();
  int x1 = std::numeric_limits<int>::min();
  int y0 = x0;
  int y1 = x1;
  for (const auto& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  long count = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      // Inside or on a convex polygon iff on the same side of every edge.
      bool neg = false;
      bool pos = false;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const long long c = cross(verts[i], verts[(i + 1) % verts.size()], {x, y});
        neg = neg || c < 0;
        pos = pos || c > 0;
      }
      if (!(neg && pos)) ++count;
    }
  }
  return count;
}

int otsu_level(const GrayImage& img) {
  std::vector<int> levels(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    levels[i] = static_cast<int>(std::round(std::clamp(img[i], 0.0, 1.0) * 255.0));
  }
  double best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (int v : levels) {
      if (v <= t) {
        n0 += 1;
        s0 += v;
      } else {
        n1 += 1;
        s1 += v;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const double between = n0 * n1 * (s0 / n0 - s1 / n1) * (s0 / n0 - s1 / n1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace ballast::reference
