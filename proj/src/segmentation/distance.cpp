#include <cmath>
#include <limits>
#include <vector>

#include "ballast/segmentation.hpp"

namespace ballast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of sampled function f (lower envelope of
// parabolas). f, d have length n; v, z are scratch.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
  int k = 0;
  int first = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] < kInf) {
      first = q;
      break;
    }
  }
  if (first < 0) {
    for (int q = 0; q < n; ++q) d[q] = kInf;
    return;
  }
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

GrayImage distance_transform(const BinaryMask& features) {
  const int width = features.width();
  const int height = features.height();
  GrayImage sq(width, height);
  for (std::size_t i = 0; i < features.size(); ++i) {
    sq[i] = features[i] ? 0.0 : kInf;
  }

#pragma omp parallel
  {
    const int n = std::max(width, height);
    std::vector<double> f(static_cast<std::size_t>(n));
    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

#pragma omp for schedule(static)
    for (int x = 0; x < width; ++x) {
      for (int y = 0; y < height; ++y) f[y] = sq(x, y);
      edt_1d(f.data(), d.data(), height, v, z);
      for (int y = 0; y < height; ++y) sq(x, y) = d[y];
    }

#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      auto row = sq.row(y);
      std::copy(row.begin(), row.end(), f.begin());
      edt_1d(f.data(), d.data(), width, v, z);
      std::copy(d.begin(), d.begin() + width, row.begin());
    }
  }

  for (double& v : sq.pixels()) {
    v = std::sqrt(v);
  }
  return sq;
}

}  // namespace ballast
