#pragma once

// Synthetic fixtures: bright disks on a dark field with known geometry.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "ballast/image.hpp"

namespace ballast::testkit {

struct Disk {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  double level = 0.8;
};

/// Pixel (x, y) belongs to a disk iff (x - cx)^2 + (y - cy)^2 <= radius^2.
bool covers(const Disk& d, int x, int y);

/// Number of pixel centers covered by the disk inside a w x h frame.
std::int64_t disk_area(const Disk& d, int w, int h);

/// Disks painted over `background`. When `noise` > 0 every pixel gets a
/// deterministic uniform perturbation in [-noise, noise] drawn from `seed`.
GrayImage render_disks(int w, int h, const std::vector<Disk>& disks, double background = 0.1,
                       double noise = 0.0, std::uint32_t seed = 1);

RgbImage render_disks_rgb(int w, int h, const std::vector<Disk>& disks, double background = 0.1,
                          double noise = 0.0, std::uint32_t seed = 1);

/// k disks of the given radius on a row-major grid with `gap` pixels between
/// neighboring rims, centered in a w x h frame.
std::vector<Disk> grid_disks(int k, int w, int h, double radius, double gap);

/// Densely packed disks of random radius in [rmin, rmax], rims at least
/// `gap` apart and away from the frame. Deterministic for a given seed.
std::vector<Disk> scatter_disks(int w, int h, double rmin, double rmax, double gap, std::uint32_t seed,
                                int max_disks = 1000);

GrayImage random_image(int w, int h, std::mt19937& rng);

/// Random image quantized to `levels` values, which creates plateaus.
GrayImage random_levels(int w, int h, int levels, std::mt19937& rng);

/// Random multiples of 2^-bits; 1 - (1 - v) == v holds exactly for them.
GrayImage random_dyadic(int w, int h, int bits, std::mt19937& rng);

BinaryMask random_mask(int w, int h, double density, std::mt19937& rng);

/// Rasterizes the points into a mask just large enough to hold them.
BinaryMask rasterize(int w, int h, const std::vector<std::array<int, 2>>& points);

}  // namespace ballast::testkit
