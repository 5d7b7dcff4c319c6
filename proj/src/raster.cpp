#include "pgmap/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pgmap {

ProbRaster::ProbRaster(int rows_, int cols_, GeoScale scale_, float fill)
    : rows(rows_), cols(cols_), scale(scale_) {
  if (rows <= 0 || cols <= 0)
    throw ValidationError("raster extent must be positive");
  if (!(fill >= 0.0f && fill <= 1.0f))
    throw ValidationError("raster values must lie in [0,1]");
  values.assign(static_cast<std::size_t>(rows) * cols, fill);
}

BinaryMask::BinaryMask(int rows_, int cols_, GeoScale scale_, std::uint8_t fill)
    : rows(rows_), cols(cols_), scale(scale_) {
  if (rows <= 0 || cols <= 0)
    throw ValidationError("mask extent must be positive");
  if (fill > 1) throw ValidationError("mask values must be 0 or 1");
  values.assign(static_cast<std::size_t>(rows) * cols, fill);
}

std::vector<PixelRC> thick_segment_pixels(PixelPoint p, PixelPoint q,
                                          int width_px, int rows, int cols) {
  std::vector<PixelRC> out;
  for_each_band_pixel(p, q, width_px, rows, cols,
                      [&out](int r, int c) { out.push_back({r, c}); });
  std::sort(out.begin(), out.end());
  return out;
}

BinaryMask rasterize_gt_lines(const GridGraph& graph, int rows, int cols,
                              int width_px, GeoScale scale) {
  BinaryMask mask(rows, cols, scale);
  for (const auto& [a, b] : graph.edges()) {
    for_each_band_pixel(centroid(graph.box(a)), centroid(graph.box(b)),
                        width_px, rows, cols,
                        [&mask](int r, int c) { mask.at(r, c) = 1; });
  }
  return mask;
}

MaskOverlap mask_overlap(const BinaryMask& a, const BinaryMask& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ValidationError("mask shapes differ");
  MaskOverlap o;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const bool va = a.values[k] != 0;
    const bool vb = b.values[k] != 0;
    o.intersection += va && vb;
    o.set_union += va || vb;
  }
  return o;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  const MaskOverlap o = mask_overlap(a, b);
  if (o.set_union == 0) return 1.0;
  return static_cast<double>(o.intersection) /
         static_cast<double>(o.set_union);
}

BinaryMask binarize(const ProbRaster& raster, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ValidationError("threshold must lie in [0,1]");
  BinaryMask mask(raster.rows, raster.cols, raster.scale);
  for (std::size_t k = 0; k < raster.values.size(); ++k)
    mask.values[k] = raster.values[k] >= threshold ? 1 : 0;
  return mask;
}

ProbRaster to_raster(const BinaryMask& mask) {
  ProbRaster out(mask.rows, mask.cols, mask.scale);
  for (std::size_t k = 0; k < mask.values.size(); ++k)
    out.values[k] = mask.values[k] ? 1.0f : 0.0f;
  return out;
}

namespace {

constexpr char kMagic[4] = {'P', 'G', 'R', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

RasterLoadResult parse_pgr(std::string_view bytes) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 16) throw IoError("raster file truncated: short header");
  const std::uint32_t rows = get_u32(data + 4);
  const std::uint32_t cols = get_u32(data + 8);
  std::uint32_t scale_bits = get_u32(data + 12);
  float mpp;
  static_assert(sizeof(mpp) == 4);
  std::memcpy(&mpp, &scale_bits, 4);
  if (rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24))
    throw IoError("raster header has implausible shape");
  if (!(mpp > 0.0f)) throw IoError("raster header has invalid scale");
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (bytes.size() != 16 + 4 * n)
    throw IoError("raster file truncated: payload size mismatch");

  RasterLoadResult result;
  result.raster = ProbRaster(static_cast<int>(rows), static_cast<int>(cols),
                             GeoScale(mpp));
  const unsigned char* v = data + 16;
  for (std::size_t k = 0; k < n; ++k, v += 4) {
    std::uint32_t bits = get_u32(v);
    float f;
    std::memcpy(&f, &bits, 4);
    if (!(f >= 0.0f)) {  // negative or NaN
      f = 0.0f;
      ++result.clamped;
    } else if (f > 1.0f) {
      f = 1.0f;
      ++result.clamped;
    }
    result.raster.values[k] = f;
  }
  return result;
}

// 8-bit grayscale PGM (P5), maxval 255; values map v/255. '#' header
// comments are honored.
RasterLoadResult parse_pgm(std::string_view bytes, GeoScale scale) {
  std::size_t pos = 2;  // past "P5"
  auto next_int = [&]() -> long {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
      throw IoError("malformed PGM header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])))
      v = v * 10 + (bytes[pos++] - '0');
    return v;
  };
  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (maxval != 255) throw IoError("PGM maxval must be 255");
  if (width <= 0 || height <= 0) throw IoError("PGM shape must be positive");
  ++pos;  // single whitespace byte before the payload
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos != n) throw IoError("PGM payload size mismatch");

  RasterLoadResult result;
  result.raster = ProbRaster(static_cast<int>(height), static_cast<int>(width),
                             scale);
  for (std::size_t k = 0; k < n; ++k)
    result.raster.values[k] =
        static_cast<float>(static_cast<unsigned char>(bytes[pos + k])) / 255.0f;
  return result;
}

}  // namespace

std::string serialize_raster(const ProbRaster& raster) {
  if (raster.rows <= 0 || raster.cols <= 0)
    throw ValidationError("cannot serialize an empty raster");
  std::string out;
  out.reserve(16 + raster.values.size() * 4);
  out.append(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(raster.rows));
  put_u32(out, static_cast<std::uint32_t>(raster.cols));
  const float mpp = static_cast<float>(raster.scale.meters_per_pixel());
  std::uint32_t bits;
  std::memcpy(&bits, &mpp, 4);
  put_u32(out, bits);
  for (const float f : raster.values) {
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
  }
  return out;
}

RasterLoadResult parse_raster(std::string_view bytes, GeoScale pgm_scale) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0)
    return parse_pgr(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
    return parse_pgm(bytes, pgm_scale);
  throw IoError("unrecognized raster format (expected PGR1 or P5 magic)");
}

void save_raster(const ProbRaster& raster, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::string bytes = serialize_raster(raster);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path);
}

RasterLoadResult load_raster(const std::string& path, GeoScale pgm_scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_raster(buf.str(), pgm_scale);
}

}  // namespace pgmap
