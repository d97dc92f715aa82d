#pragma once

#include <span>

#include <json.hpp>

#include "ctedit/features.hpp"
#include "ctedit/topology.hpp"

namespace ctedit {

// JSON shapes (all ids are super-pixel or pair ids of the current revision):
//
// pair      {"pair":3,"kind":"join","extremum":5,"saddle":9,"birth":1.0,
//            "death":3.0,"persistence":2.0,"volume":2}
// diagrams  {"channel":"brightness","pairs":[pair...],
//            "pd":[{"pair":3,"x":1.0,"y":3.0,"kind":"join"}...],
//            "pv":[{"pair":3,"x":2.0,"y":2,"kind":"join"}...]}
// trees     {"width":..,"height":..,"connectivity":8,
//            "superpixels":[{"id":0,"value":2.0,"pixels":[0,1]}...],
//            "join_parent":[...],"split_parent":[...],
//            "contour_tree":{"nodes":[{"id":..,"value":..,"pairs":[3]}...],
//                            "arcs":[{"lower":..,"upper":..,"absorbed":[...]}...]},
//            "pairs":[pair...]}
// Parents are -1 at the root. A critical node lists every pair it belongs to.
// "contour_tree" is null when the join and split trees do not merge (only
// possible with 4-connectivity).

nlohmann::json to_json(const FeaturePair& pair);
nlohmann::json to_json(std::span<const DiagramPoint> points);
nlohmann::json to_json(std::span<const PVPoint> points);

/// Brush rects as {"x":[low,high],"y":[low,high]}. Throws InvalidArgument.
BrushRect rect_from_json(const nlohmann::json& value, DiagramKind diagram);
nlohmann::json to_json(const BrushRect& rect);

nlohmann::json diagrams_json(const ChannelTopology& topology, ChannelId channel);
nlohmann::json trees_json(const ChannelTopology& topology);

}  // namespace ctedit
