#pragma once

// Serial, deliberately naive implementations of the kernels in ballast_core.
// They follow the textbook definitions directly and serve as test oracles and
// as the baseline in the kernel benchmark. Not linked into the tools.

#include <vector>

#include "ballast/analysis.hpp"
#include "ballast/image.hpp"

namespace ballast::reference {

/// Double loop over the clipped (2*ceil(2 sigma_s)+1)^2 window, with the
/// spatial and range Gaussians evaluated separately. sigma_r on the 0..255 scale.
GrayImage bilateral(const GrayImage& img, double sigma_s, double sigma_r);

/// Normalized spatial Gaussian over the same clipped window.
GrayImage gaussian_blur(const GrayImage& img, double sigma_s);

GrayImage erode(const GrayImage& img, int radius);
GrayImage dilate(const GrayImage& img, int radius);
BinaryMask erode(const BinaryMask& img, int radius);
BinaryMask dilate(const BinaryMask& img, int radius);

/// Iterates J <- min(max over 3x3 of J, mask) until nothing changes.
GrayImage reconstruct(const GrayImage& marker, const GrayImage& mask);

/// Direct 3x3 convolution with the Sobel kernels, replicated borders, / 8.
GrayImage sobel(const GrayImage& img);

/// Candidate elimination: drop pixels with a higher neighbor or an equal
/// neighbor that is not a candidate, until stable.
BinaryMask regional_maxima(const GrayImage& img);

/// Union-find component count, 8-connected.
int count_components(const BinaryMask& mask);

/// True if every pixel with value `label` is 8-reachable from the first one.
bool is_connected(const LabelMatrix& labels, std::int32_t label);

/// Brute-force Euclidean distance to the nearest true pixel.
GrayImage distance(const BinaryMask& features);

/// Hull vertices as endpoints of all supporting pairs (O(n^3)), sorted by
/// angle around their centroid, shoelace area.
double hull_area(const std::vector<PixelPoint>& points);

/// Number of lattice points inside or on the convex hull of `points`
/// (point-in-polygon over the bounding box).
long hull_lattice_count(const std::vector<PixelPoint>& points);

/// Exact Otsu by trying every level and computing both class variances from scratch.
int otsu_level(const GrayImage& img);

}  // namespace ballast::reference
