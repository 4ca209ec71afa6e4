#pragma once

// Small three-band scenes and a matching lightweight configuration shared by
// the CLI, service and HTTP tests.

#include <string>
#include <vector>

#include "ballast/imageio.hpp"
#include "ballast/pipeline.hpp"
#include "synthetic.hpp"

namespace ballast::testkit {

/// Bilateral 2/8, strel 6 everywhere, 1000 px calibration ball.
inline PipelineConfig light_config(Mode mode = Mode::Stitched) {
  PipelineConfig cfg = default_config();
  for (auto& layer : cfg.layers) {
    layer.bilateral = {2.0, 8.0};
    layer.seg.strel_radius = 6;
  }
  cfg.calibration.ball_area_px = 1000.0;
  cfg.mode = mode;
  return cfg;
}

/// Command-line flags equivalent to light_config().
inline std::vector<std::string> light_flags() {
  return {"--sigma-s", "2", "--sigma-r", "8", "--strel", "6", "--ball-area-px", "1000"};
}

/// 240 x 180 image, three disks of varying size in every 60-row band.
inline RgbImage layered_scene(std::uint32_t seed = 7) {
  std::vector<Disk> disks;
  const double radii[3][3] = {{14, 9, 18}, {16, 12, 7}, {11, 19, 15}};
  for (int band = 0; band < 3; ++band) {
    for (int i = 0; i < 3; ++i) {
      disks.push_back({40.0 + 80.0 * i, 30.0 + 60.0 * band, radii[band][i], 0.75 + 0.05 * i});
    }
  }
  return render_disks_rgb(240, 180, disks, 0.1, 0.02, seed);
}

inline std::vector<std::uint8_t> layered_scene_png(std::uint32_t seed = 7) {
  return encode_png(layered_scene(seed));
}

}  // namespace ballast::testkit
