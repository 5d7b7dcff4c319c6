#include "pgmap/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pgmap {

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::T: return "T";
    case NodeKind::OT: return "OT";
    case NodeKind::EN: return "EN";
  }
  throw ValidationError("unknown node kind");
}

NodeKind parse_node_kind(const std::string& token) {
  if (token == "T") return NodeKind::T;
  if (token == "OT") return NodeKind::OT;
  if (token == "EN") return NodeKind::EN;
  throw ValidationError("unknown node kind '" + token + "'");
}

TowerBox::TowerBox(PixelPoint top_left_, double height_px_, double width_px_,
                   NodeKind kind_, std::optional<double> confidence_)
    : top_left(top_left_),
      height_px(height_px_),
      width_px(width_px_),
      kind(kind_),
      confidence(confidence_) {
  if (!std::isfinite(top_left.row) || !std::isfinite(top_left.col))
    throw ValidationError("box corner must be finite");
  if (kind == NodeKind::EN) {
    if (height_px != 1.0 || width_px != 1.0)
      throw ValidationError("EN nodes carry a degenerate 1x1 box");
  } else if (!(height_px > 0.0) || !(width_px > 0.0)) {
    throw ValidationError("box extent must be positive");
  }
  if (confidence && !(*confidence >= 0.0 && *confidence <= 1.0))
    throw ValidationError("confidence must lie in [0,1]");
}

TowerBox TowerBox::edge_node(PixelPoint crossing) {
  return TowerBox({crossing.row - 0.5, crossing.col - 0.5}, 1.0, 1.0,
                  NodeKind::EN);
}

PixelPoint centroid(const TowerBox& box) {
  return {box.top_left.row + box.height_px / 2.0,
          box.top_left.col + box.width_px / 2.0};
}

double centroid_distance_px(const TowerBox& a, const TowerBox& b) {
  const PixelPoint ca = centroid(a);
  const PixelPoint cb = centroid(b);
  return std::hypot(ca.row - cb.row, ca.col - cb.col);
}

double centroid_distance_m(const TowerBox& a, const TowerBox& b,
                           const GeoScale& scale) {
  return scale.to_meters(centroid_distance_px(a, b));
}

double box_iou(const TowerBox& a, const TowerBox& b) {
  const double inter_h =
      std::min(a.top_left.row + a.height_px, b.top_left.row + b.height_px) -
      std::max(a.top_left.row, b.top_left.row);
  const double inter_w =
      std::min(a.top_left.col + a.width_px, b.top_left.col + b.width_px) -
      std::max(a.top_left.col, b.top_left.col);
  if (inter_h <= 0.0 || inter_w <= 0.0) return 0.0;
  const double inter = inter_h * inter_w;
  const double uni =
      a.height_px * a.width_px + b.height_px * b.width_px - inter;
  return inter / uni;
}

}  // namespace pgmap
