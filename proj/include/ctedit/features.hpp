#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctedit/topology.hpp"

namespace ctedit {

/// Scatterplot point of the persistence diagram: x = birth, y = death.
struct DiagramPoint {
  int pair_id = -1;
  double x = 0.0;
  double y = 0.0;
  FeatureKind kind = FeatureKind::Join;
};

/// Persistence-volume point: x = persistence, y = pixel volume. The log
/// scale of the volume axis is a rendering concern only.
struct PVPoint {
  int pair_id = -1;
  double x = 0.0;
  std::int64_t y = 1;
  FeatureKind kind = FeatureKind::Join;
};

enum class DiagramKind { PD, PV };

std::string_view to_string(DiagramKind kind);
DiagramKind parse_diagram_kind(std::string_view name);

/// Axis-aligned brush in data coordinates; containment is boundary-exclusive.
struct BrushRect {
  DiagramKind diagram = DiagramKind::PD;
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  /// Throws InvalidArgument unless x_min < x_max and y_min < y_max.
  static BrushRect make(DiagramKind diagram, double x_min, double x_max, double y_min,
                        double y_max);
  bool contains(double x, double y) const {
    return x > x_min && x < x_max && y > y_min && y < y_max;
  }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // one byte per pixel, 0 or 1

  std::int64_t popcount() const;
};

/// One point per join/split feature; the Global pair twice, (min, max) and
/// (max, min).
std::vector<DiagramPoint> persistence_diagram(std::span<const FeaturePair> pairs);

/// One point per feature including the Global pair. Requires volumes.
std::vector<PVPoint> persistence_volume_diagram(std::span<const FeaturePair> pairs);

/// Sorted unique pair ids of points strictly inside any of the rects.
std::vector<int> brush_select(std::span<const DiagramPoint> points,
                              std::span<const BrushRect> rects);
std::vector<int> brush_select(std::span<const PVPoint> points,
                              std::span<const BrushRect> rects);

struct SelectedFeature {
  int pair_id = -1;
  std::vector<int> subtree;  // super-pixel ids, sorted ascending
};

/// Drops every feature whose subtree is contained in another selected
/// feature's subtree. Equal subtrees keep the lower pair id. Returns sorted ids.
std::vector<int> filter_inclusions(std::span<const SelectedFeature> selected);

/// Pixel mask over the union of the given super-pixel sets.
BinaryMask build_mask(const SuperPixelGraph& graph,
                      std::span<const std::vector<int>> subtrees, int width, int height);

/// Brush on a channel's diagram, filter inclusions, and collect subtrees.
struct ResolvedSelection {
  std::vector<int> brushed;    // every pair id under the brush
  std::vector<int> outermost;  // after inclusion filtering
  std::vector<std::vector<int>> subtrees;  // parallel to outermost
};

ResolvedSelection resolve_selection(const ChannelTopology& topology,
                                    std::span<const BrushRect> rects);

}  // namespace ctedit
