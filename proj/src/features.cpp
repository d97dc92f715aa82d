#include "ctedit/features.hpp"

#include <algorithm>
#include <string>

#include "ctedit/errors.hpp"

namespace ctedit {

std::string_view to_string(DiagramKind kind) {
  return kind == DiagramKind::PD ? "pd" : "pv";
}

DiagramKind parse_diagram_kind(std::string_view name) {
  if (name == "pd" || name == "PD") return DiagramKind::PD;
  if (name == "pv" || name == "PV") return DiagramKind::PV;
  throw Error(ErrorCode::InvalidArgument,
              "diagram kind must be 'pd' or 'pv', got '" + std::string(name) + "'");
}

BrushRect BrushRect::make(DiagramKind diagram, double x_min, double x_max, double y_min,
                          double y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw Error(ErrorCode::InvalidArgument, "brush rect ranges must satisfy min < max");
  }
  return BrushRect{diagram, x_min, x_max, y_min, y_max};
}

std::int64_t BinaryMask::popcount() const {
  return std::count(bits.begin(), bits.end(), std::uint8_t{1});
}

std::vector<DiagramPoint> persistence_diagram(std::span<const FeaturePair> pairs) {
  std::vector<DiagramPoint> points;
  points.reserve(pairs.size() + 1);
  for (const auto& p : pairs) {
    points.push_back({p.id, p.birth, p.death, p.kind});
    if (p.kind == FeatureKind::Global) points.push_back({p.id, p.death, p.birth, p.kind});
  }
  return points;
}

std::vector<PVPoint> persistence_volume_diagram(std::span<const FeaturePair> pairs) {
  std::vector<PVPoint> points;
  points.reserve(pairs.size());
  for (const auto& p : pairs) points.push_back({p.id, p.persistence, p.volume, p.kind});
  return points;
}

namespace {

template <typename Point>
std::vector<int> brush_points(std::span<const Point> points, std::span<const BrushRect> rects,
                              DiagramKind kind) {
  std::vector<int> ids;
  for (const auto& rect : rects) {
    if (rect.diagram != kind) {
      throw Error(ErrorCode::InvalidArgument, "brush rect targets the other diagram");
    }
    for (const auto& pt : points) {
      if (rect.contains(pt.x, static_cast<double>(pt.y))) ids.push_back(pt.pair_id);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::vector<int> brush_select(std::span<const DiagramPoint> points,
                              std::span<const BrushRect> rects) {
  return brush_points(points, rects, DiagramKind::PD);
}

std::vector<int> brush_select(std::span<const PVPoint> points,
                              std::span<const BrushRect> rects) {
  return brush_points(points, rects, DiagramKind::PV);
}

std::vector<int> filter_inclusions(std::span<const SelectedFeature> selected) {
  // Largest first (ties by id), so a candidate can only be contained in a
  // feature that was already kept. `covering[v]` lists kept features holding v.
  std::vector<std::size_t> order(selected.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto sa = selected[a].subtree.size();
    const auto sb = selected[b].subtree.size();
    return sa > sb || (sa == sb && selected[a].pair_id < selected[b].pair_id);
  });

  int max_node = -1;
  for (const auto& f : selected) {
    if (!f.subtree.empty()) max_node = std::max(max_node, f.subtree.back());
  }
  std::vector<std::vector<std::size_t>> covering(static_cast<std::size_t>(max_node + 1));
  std::vector<int> kept;
  for (std::size_t idx : order) {
    const auto& candidate = selected[idx];
    bool contained = false;
    if (!candidate.subtree.empty()) {
      for (std::size_t holder : covering[candidate.subtree.front()]) {
        const auto& big = selected[holder].subtree;
        const bool all_in = std::all_of(
            candidate.subtree.begin(), candidate.subtree.end(),
            [&](int v) { return std::binary_search(big.begin(), big.end(), v); });
        if (all_in) {
          contained = true;
          break;
        }
      }
    }
    if (contained) continue;
    kept.push_back(candidate.pair_id);
    for (int v : candidate.subtree) covering[v].push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

BinaryMask build_mask(const SuperPixelGraph& graph,
                      std::span<const std::vector<int>> subtrees, int width, int height) {
  if (width != graph.width() || height != graph.height()) {
    throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ from the channel");
  }
  BinaryMask mask;
  mask.width = width;
  mask.height = height;
  mask.bits.assign(static_cast<std::size_t>(width) * height, 0);
  for (const auto& nodes : subtrees) {
    for (int v : nodes) {
      if (v < 0 || v >= graph.node_count()) {
        throw Error(ErrorCode::InvalidArgument, "subtree references an unknown super-pixel");
      }
      for (auto p : graph.members(v)) mask.bits[p] = 1;
    }
  }
  return mask;
}

ResolvedSelection resolve_selection(const ChannelTopology& topology,
                                    std::span<const BrushRect> rects) {
  ResolvedSelection out;
  std::vector<BrushRect> pd_rects;
  std::vector<BrushRect> pv_rects;
  for (const auto& r : rects) (r.diagram == DiagramKind::PD ? pd_rects : pv_rects).push_back(r);
  std::vector<int> ids;
  if (!pd_rects.empty()) {
    const auto pts = persistence_diagram(topology.pairs);
    ids = brush_select(std::span<const DiagramPoint>(pts), pd_rects);
  }
  if (!pv_rects.empty()) {
    const auto pts = persistence_volume_diagram(topology.pairs);
    const auto more = brush_select(std::span<const PVPoint>(pts), pv_rects);
    ids.insert(ids.end(), more.begin(), more.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  out.brushed = ids;

  std::vector<SelectedFeature> selected;
  selected.reserve(ids.size());
  for (int id : ids) selected.push_back({id, topology.subtree(id)});
  out.outermost = filter_inclusions(selected);
  for (int id : out.outermost) {
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    out.subtrees.push_back(std::move(selected[it - ids.begin()].subtree));
  }
  return out;
}

}  // namespace ctedit
