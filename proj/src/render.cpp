#include "pgmap/render.hpp"

#include <cmath>
#include <fstream>

namespace pgmap {

RgbImage::RgbImage(int rows_, int cols_, std::array<std::uint8_t, 3> fill)
    : rows(rows_), cols(cols_) {
  if (rows <= 0 || cols <= 0)
    throw ValidationError("image extent must be positive");
  px.resize(static_cast<std::size_t>(rows) * cols * 3);
  for (std::size_t k = 0; k < px.size(); k += 3) {
    px[k] = fill[0];
    px[k + 1] = fill[1];
    px[k + 2] = fill[2];
  }
}

void RgbImage::set(int r, int c, std::array<std::uint8_t, 3> rgb) {
  const std::size_t k = (static_cast<std::size_t>(r) * cols + c) * 3;
  px[k] = rgb[0];
  px[k + 1] = rgb[1];
  px[k + 2] = rgb[2];
}

namespace {

void draw_graph(RgbImage& img, const GridGraph& graph,
                std::array<std::uint8_t, 3> color, int line_width) {
  auto paint = [&](int r, int c) { img.set(r, c, color); };
  for (const auto& [a, b] : graph.edges()) {
    for_each_band_pixel(centroid(graph.box(a)), centroid(graph.box(b)),
                        line_width, img.rows, img.cols, paint);
  }
  for (const auto& [id, box] : graph.nodes()) {
    const PixelPoint tl = box.top_left;
    const PixelPoint tr{tl.row, tl.col + box.width_px};
    const PixelPoint bl{tl.row + box.height_px, tl.col};
    const PixelPoint br{tl.row + box.height_px, tl.col + box.width_px};
    for (const auto& [p, q] :
         {std::pair{tl, tr}, {tr, br}, {br, bl}, {bl, tl}}) {
      for_each_band_pixel(p, q, 1, img.rows, img.cols, paint);
    }
  }
}

}  // namespace

RgbImage render_overlay(const SceneAnnotation& gt, const SceneAnnotation* pred,
                        const ProbRaster* background,
                        const RenderOptions& options) {
  const int rows = background ? background->rows : gt.rows;
  const int cols = background ? background->cols : gt.cols;
  RgbImage img(rows, cols);
  if (background) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const auto v = static_cast<std::uint8_t>(
            std::lround(background->at(r, c) * 255.0f));
        img.set(r, c, {v, v, v});
      }
    }
  }
  draw_graph(img, gt.graph, options.gt_color, options.line_width_px);
  if (pred) draw_graph(img, pred->graph, options.pred_color,
                       options.line_width_px);
  return img;
}

std::string encode_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.cols) + " " +
                    std::to_string(image.rows) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.px.data()), image.px.size());
  return out;
}

void save_ppm(const RgbImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string bytes = encode_ppm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace pgmap
