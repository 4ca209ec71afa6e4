#include <cmath>
#include <random>

#include <omp.h>

#include "doctest.h"

#include "ballast/preprocess.hpp"
#include "ballast/reference.hpp"
#include "synthetic.hpp"

using namespace ballast;

namespace {

double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("tone curve") {
  GrayImage img(3, 1);
  img[0] = 0.5;
  img[1] = 0.9;
  img[2] = 0.0;
  CHECK(adjust_tone(img, {1.0, 1.0}) == img);
  CHECK(adjust_tone(img, {1.45, 1.0})[0] == doctest::Approx(std::pow(0.5, 1.45)).epsilon(1e-14));
  CHECK(std::pow(0.5, 1.45) == doctest::Approx(0.3660).epsilon(1e-4));
  CHECK(adjust_tone(img, {1.0, 1.3})[1] == 1.0);
  CHECK_THROWS_AS(adjust_tone(img, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(adjust_tone(img, {1.0, -1.0}), Error);
}

TEST_CASE("tone curve is monotone") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> g(0.2, 3.0);
  std::uniform_real_distribution<double> k(0.3, 2.0);
  GrayImage ramp(256, 1);
  for (int x = 0; x < 256; ++x) ramp(x, 0) = x / 255.0;
  for (int t = 0; t < 50; ++t) {
    const auto out = adjust_tone(ramp, {g(rng), k(rng)});
    for (int x = 1; x < 256; ++x) CHECK(out(x, 0) >= out(x - 1, 0));
  }
}

TEST_CASE("histogram matching") {
  SUBCASE("self match is identity up to quantization") {
    std::mt19937 rng(2);
    const auto img = testkit::random_image(24, 24, rng);
    CHECK(max_abs_diff(histogram_match(img, img), img) <= 1.0 / 255.0);
  }
  SUBCASE("constant onto constant") {
    const auto out = histogram_match(GrayImage(5, 5, 0.2), GrayImage(3, 3, 0.8));
    for (double v : out.pixels()) CHECK(v == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("two levels onto two levels") {
    GrayImage in(4, 2);
    GrayImage ref(2, 2);
    for (int x = 0; x < 4; ++x) {
      in(x, 0) = (x % 2) ? 1.0 : 0.0;
      in(x, 1) = (x % 2) ? 0.0 : 1.0;
    }
    ref[0] = ref[1] = 0.25;
    ref[2] = ref[3] = 0.75;
    const auto out = histogram_match(in, ref);
    for (std::size_t i = 0; i < in.size(); ++i) {
      CHECK(out[i] == doctest::Approx(in[i] == 0.0 ? 0.25 : 0.75).epsilon(1e-15));
    }
  }
  SUBCASE("idempotent") {
    std::mt19937 rng(9);
    const auto img = testkit::random_image(30, 20, rng);
    GrayImage ref(16, 16);
    std::normal_distribution<double> n(0.6, 0.1);
    for (auto& v : ref.pixels()) v = std::clamp(n(rng), 0.0, 1.0);
    const auto once = histogram_match(img, ref);
    const auto twice = histogram_match(once, ref);
    CHECK(max_abs_diff(once, twice) <= 1.0 / 255.0);
  }
}

TEST_CASE("bilateral radius") {
  CHECK(bilateral_radius(3.0) == 6);
  CHECK(bilateral_radius(2.5) == 5);
  CHECK(bilateral_radius(0.3) == 1);
}

TEST_CASE("bilateral matches the direct double loop") {
  std::mt19937 rng(1);
  for (auto [ss, sr] : {std::pair{3.0, 8.0}, {2.0, 4.0}, {1.5, 10.0}}) {
    const auto img = testkit::random_image(32, 32, rng);
    CHECK(max_abs_diff(bilateral_filter(img, {ss, sr}), reference::bilateral(img, ss, sr)) <= 1e-9);
  }
}

TEST_CASE("bilateral of a constant image") {
  const GrayImage img(17, 9, 0.42);
  const auto out = bilateral_filter(img, {3.0, 8.0});
  for (double v : out.pixels()) CHECK(v == doctest::Approx(0.42).epsilon(1e-14));
}

TEST_CASE("huge range width degenerates to Gaussian blur") {
  std::mt19937 rng(4);
  const auto img = testkit::random_image(24, 24, rng);
  CHECK(max_abs_diff(bilateral_filter(img, {2.0, 1e6}), reference::gaussian_blur(img, 2.0)) <= 1e-6);
}

TEST_CASE("bilateral output is a convex combination of its window") {
  std::mt19937 rng(6);
  const auto img = testkit::random_image(20, 20, rng);
  const BilateralParams p{2.0, 8.0};
  const auto out = bilateral_filter(img, p);
  const int r = bilateral_radius(p.sigma_s);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double lo = 1.0;
      double hi = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          if (!img.in_bounds(x + dx, y + dy)) continue;
          lo = std::min(lo, img(x + dx, y + dy));
          hi = std::max(hi, img(x + dx, y + dy));
        }
      }
      CHECK(out(x, y) >= lo);
      CHECK(out(x, y) <= hi);
    }
  }
}

TEST_CASE("bilateral preserves a step edge better than the Gaussian") {
  GrayImage step(40, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 40; ++x) step(x, y) = x < 20 ? 0.0 : 1.0;
  }
  const auto bf = bilateral_filter(step, {3.0, 8.0});
  const auto gb = reference::gaussian_blur(step, 3.0);
  for (int x : {17, 18, 19}) CHECK(std::abs(bf(x, 4) - 0.0) < std::abs(gb(x, 4) - 0.0));
  for (int x : {20, 21, 22}) CHECK(std::abs(bf(x, 4) - 1.0) < std::abs(gb(x, 4) - 1.0));
}

TEST_CASE("bilateral does not depend on the thread count") {
  std::mt19937 rng(8);
  const auto img = testkit::random_image(48, 40, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto serial = bilateral_filter(img, {3.0, 8.0});
  omp_set_num_threads(4);
  const auto parallel = bilateral_filter(img, {3.0, 8.0});
  omp_set_num_threads(saved);
  CHECK(serial == parallel);
}
