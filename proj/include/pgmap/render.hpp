#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "pgmap/raster.hpp"
#include "pgmap/scene.hpp"

namespace pgmap {

struct RgbImage {
  RgbImage() = default;
  RgbImage(int rows, int cols, std::array<std::uint8_t, 3> fill = {0, 0, 0});

  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> px;  // rgb, row-major

  void set(int r, int c, std::array<std::uint8_t, 3> rgb);
};

struct RenderOptions {
  std::array<std::uint8_t, 3> gt_color{0, 255, 0};
  std::array<std::uint8_t, 3> pred_color{0, 0, 255};
  int line_width_px = 3;
};

/// Static overlay of ground truth (green) and prediction (blue): edges as
/// bands between centroids, towers as box outlines. Prediction draws over
/// ground truth. The canvas comes from `background` when given, else from
/// the gt scene extent over black. Pixel-deterministic.
RgbImage render_overlay(const SceneAnnotation& gt, const SceneAnnotation* pred,
                        const ProbRaster* background,
                        const RenderOptions& options = RenderOptions());

/// Binary PPM (P6) bytes.
std::string encode_ppm(const RgbImage& image);

void save_ppm(const RgbImage& image, const std::string& path);

}  // namespace pgmap
