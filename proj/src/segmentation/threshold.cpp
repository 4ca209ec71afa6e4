#include <array>

#include "ballast/imageio.hpp"
#include "ballast/segmentation.hpp"

namespace ballast {

double otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (double v : img.pixels()) {
    hist[quantize8(v)] += 1.0;
  }
  int populated = 0;
  double total = 0.0;
  double weighted = 0.0;
  for (int k = 0; k < 256; ++k) {
    if (hist[k] > 0.0) ++populated;
    total += hist[k];
    weighted += k * hist[k];
  }
  if (populated < 2) {
    throw Error(ErrorCode::DegenerateHistogram, "image has a single intensity level");
  }

  double best_var = -1.0;
  int best_level = 0;
  double w0 = 0.0;
  double sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (weighted - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best_var) {
      best_var = between;
      best_level = t;
    }
  }
  // Levels <= best_level are the dark class.
  return (best_level + 0.5) / 255.0;
}

}  // namespace ballast
