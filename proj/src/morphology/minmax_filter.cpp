#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "ballast/morphology.hpp"

namespace ballast {

namespace {

// The disk is a stack of horizontal runs, one per dy. Each output row is the
// pointwise extreme over 2r+1 source rows, each pre-filtered with a 1-D
// running extreme of that run's half-width (van Herk / Gil-Werman, O(1) per
// pixel regardless of width).
template <typename T, typename Op>
class RunFilter {
 public:
  RunFilter(int width, int max_half_width, T identity, Op op)
      : width_(width), identity_(identity), op_(op) {
    const std::size_t padded = static_cast<std::size_t>(width + 2 * max_half_width + 2 * max_half_width + 1);
    padded_.resize(padded);
    prefix_.resize(padded);
    suffix_.resize(padded);
  }

  // dst[x] = op over src[x-w .. x+w], out-of-range samples ignored.
  void apply(const T* src, int w, T* dst) {
    if (w == 0) {
      std::copy(src, src + width_, dst);
      return;
    }
    const int k = 2 * w + 1;
    const int n = width_ + 2 * w;
    // Round up to whole blocks so every block is complete.
    const int m = ((n + k - 1) / k) * k;
    std::fill(padded_.begin(), padded_.begin() + m, identity_);
    std::copy(src, src + width_, padded_.begin() + w);

    for (int b = 0; b < m; b += k) {
      prefix_[b] = padded_[b];
      for (int i = 1; i < k; ++i) {
        prefix_[b + i] = op_(prefix_[b + i - 1], padded_[b + i]);
      }
      suffix_[b + k - 1] = padded_[b + k - 1];
      for (int i = k - 2; i >= 0; --i) {
        suffix_[b + i] = op_(suffix_[b + i + 1], padded_[b + i]);
      }
    }
    for (int x = 0; x < width_; ++x) {
      dst[x] = op_(suffix_[x], prefix_[x + k - 1]);
    }
  }

 private:
  int width_;
  T identity_;
  Op op_;
  std::vector<T> padded_;
  std::vector<T> prefix_;
  std::vector<T> suffix_;
};

template <typename T, typename Op>
Image<T> disk_filter(const Image<T>& img, const DiskStrel& se, T identity, Op op) {
  const int width = img.width();
  const int height = img.height();
  const int r = se.radius();
  Image<T> out(width, height);

#pragma omp parallel
  {
    RunFilter<T, Op> runs(width, r, identity, op);
    std::vector<T> filtered(static_cast<std::size_t>(width));
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      auto acc = out.row(y);
      std::fill(acc.begin(), acc.end(), identity);
      const int dy0 = std::max(-r, -y);
      const int dy1 = std::min(r, height - 1 - y);
      for (int dy = dy0; dy <= dy1; ++dy) {
        runs.apply(img.row(y + dy).data(), se.half_width(dy), filtered.data());
        for (int x = 0; x < width; ++x) {
          acc[x] = op(acc[x], filtered[x]);
        }
      }
    }
  }
  return out;
}

struct MinOp {
  template <typename T>
  T operator()(T a, T b) const noexcept {
    return b < a ? b : a;
  }
};

struct MaxOp {
  template <typename T>
  T operator()(T a, T b) const noexcept {
    return a < b ? b : a;
  }
};

}  // namespace

GrayImage erode(const GrayImage& img, const DiskStrel& se) {
  return disk_filter(img, se, std::numeric_limits<double>::infinity(), MinOp{});
}

GrayImage dilate(const GrayImage& img, const DiskStrel& se) {
  return disk_filter(img, se, -std::numeric_limits<double>::infinity(), MaxOp{});
}

BinaryMask erode(const BinaryMask& mask, const DiskStrel& se) {
  return disk_filter(mask, se, std::uint8_t{1}, MinOp{});
}

BinaryMask dilate(const BinaryMask& mask, const DiskStrel& se) {
  return disk_filter(mask, se, std::uint8_t{0}, MaxOp{});
}

BinaryMask close(const BinaryMask& mask, const DiskStrel& se) { return erode(dilate(mask, se), se); }

}  // namespace ballast
