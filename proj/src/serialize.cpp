#include "ctedit/serialize.hpp"

#include <map>
#include <string>

#include "ctedit/errors.hpp"

namespace ctedit {

using nlohmann::json;

json to_json(const FeaturePair& pair) {
  return json{{"pair", pair.id},
              {"kind", to_string(pair.kind)},
              {"extremum", pair.extremum},
              {"saddle", pair.saddle},
              {"birth", pair.birth},
              {"death", pair.death},
              {"persistence", pair.persistence},
              {"volume", pair.volume}};
}

json to_json(std::span<const DiagramPoint> points) {
  json out = json::array();
  for (const auto& p : points) {
    out.push_back({{"pair", p.pair_id}, {"x", p.x}, {"y", p.y}, {"kind", to_string(p.kind)}});
  }
  return out;
}

json to_json(std::span<const PVPoint> points) {
  json out = json::array();
  for (const auto& p : points) {
    out.push_back({{"pair", p.pair_id}, {"x", p.x}, {"y", p.y}, {"kind", to_string(p.kind)}});
  }
  return out;
}

namespace {

std::pair<double, double> read_range(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
      !(*it)[1].is_number()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("rect needs \"") + key + "\": [low, high]");
  }
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

json pairs_json(std::span<const FeaturePair> pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back(to_json(p));
  return out;
}

}  // namespace

BrushRect rect_from_json(const json& value, DiagramKind diagram) {
  if (!value.is_object()) throw Error(ErrorCode::InvalidArgument, "rect must be an object");
  const auto [x0, x1] = read_range(value, "x");
  const auto [y0, y1] = read_range(value, "y");
  return BrushRect::make(diagram, x0, x1, y0, y1);
}

json to_json(const BrushRect& rect) {
  return json{{"x", {rect.x_min, rect.x_max}}, {"y", {rect.y_min, rect.y_max}}};
}

json diagrams_json(const ChannelTopology& topology, ChannelId channel) {
  const auto pd = persistence_diagram(topology.pairs);
  const auto pv = persistence_volume_diagram(topology.pairs);
  return json{{"channel", to_string(channel)},
              {"pairs", pairs_json(topology.pairs)},
              {"pd", to_json(pd)},
              {"pv", to_json(pv)}};
}

json trees_json(const ChannelTopology& topology) {
  const auto& graph = topology.graph;
  json superpixels = json::array();
  for (int v = 0; v < graph.node_count(); ++v) {
    const auto members = graph.members(v);
    superpixels.push_back({{"id", v},
                           {"value", graph.value(v)},
                           {"pixels", std::vector<int>(members.begin(), members.end())}});
  }

  std::map<int, std::vector<int>> pair_links;
  for (const auto& p : topology.pairs) {
    pair_links[p.extremum].push_back(p.id);
    pair_links[p.saddle].push_back(p.id);
  }
  json nodes = json::array();
  for (int v : topology.ct.nodes) {
    nodes.push_back({{"id", v}, {"value", graph.value(v)}, {"pairs", pair_links[v]}});
  }
  json arcs = json::array();
  for (const auto& a : topology.ct.arcs) {
    arcs.push_back({{"lower", a.lower}, {"upper", a.upper}, {"absorbed", a.absorbed}});
  }

  return json{{"width", graph.width()},
              {"height", graph.height()},
              {"connectivity", static_cast<int>(graph.connectivity())},
              {"superpixels", std::move(superpixels)},
              {"join_parent", topology.join.parent},
              {"split_parent", topology.split.parent},
              {"contour_tree", topology.merged ? json{{"nodes", std::move(nodes)},
                                                     {"arcs", std::move(arcs)}}
                                               : json(nullptr)},
              {"pairs", pairs_json(topology.pairs)}};
}

}  // namespace ctedit
