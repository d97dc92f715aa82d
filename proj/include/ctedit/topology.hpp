#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ctedit/superpixel.hpp"

namespace ctedit {

/// Simulation-of-simplicity order over super-pixels: ascending (value, id).
/// The join sweep walks it forward, the split sweep walks it backward, so the
/// two trees always agree on which of two equal-valued nodes is "higher".
struct SweepOrder {
  std::vector<double> values;
  std::vector<int> ascending;  // node ids, lowest first
  std::vector<int> rank;       // rank[node] = position in `ascending`

  int node_count() const noexcept { return static_cast<int>(values.size()); }
  bool below(int a, int b) const { return rank[a] < rank[b]; }
};

SweepOrder make_sweep_order(const SuperPixelGraph& graph);

enum class TreeKind { Join, Split };

/// Join or split tree over every super-pixel. `parent[v]` is the node whose
/// insertion absorbed v's component (above v for Join, below v for Split);
/// the root (-1 parent) is the last node inserted.
struct AugmentedTree {
  TreeKind kind = TreeKind::Join;
  SweepOrder order;
  std::vector<int> parent;
  int root = -1;

  int node_count() const noexcept { return static_cast<int>(parent.size()); }
  std::vector<int> child_counts() const;
};

AugmentedTree build_join_tree(const SuperPixelGraph& graph);
AugmentedTree build_split_tree(const SuperPixelGraph& graph);

/// Undirected tree over all super-pixels. Arcs are stored (lower, upper).
class AugmentedContourTree {
 public:
  AugmentedContourTree() = default;
  AugmentedContourTree(SweepOrder order, std::vector<std::pair<int, int>> arcs);

  const SweepOrder& order() const noexcept { return order_; }
  int node_count() const noexcept { return order_.node_count(); }
  double value(int node) const { return order_.values[node]; }
  const std::vector<std::pair<int, int>>& arcs() const noexcept { return arcs_; }

  std::span<const std::int32_t> neighbors(int node) const {
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
  }
  int up_degree(int node) const;
  int down_degree(int node) const;

 private:
  SweepOrder order_;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::int32_t> adjacency_;
};

AugmentedContourTree merge_to_contour_tree(const AugmentedTree& join,
                                           const AugmentedTree& split);

struct ContourArc {
  int lower = -1;
  int upper = -1;
  std::vector<int> absorbed;  // regular nodes, ascending
};

/// Critical-node skeleton: regular chains contracted into single arcs.
struct ContourTree {
  SweepOrder order;
  std::vector<int> nodes;         // critical node ids, ascending id
  std::vector<ContourArc> arcs;

  bool is_critical(int node) const;
};

ContourTree reduce_regular_nodes(const AugmentedContourTree& act);

enum class FeatureKind { Join, Split, Global };

std::string_view to_string(FeatureKind kind);

/// Birth/death pair. For Join features the extremum is a minimum and the
/// saddle a join saddle (birth < death); Split features mirror that. The one
/// Global pair stores the global minimum as `extremum` and the global maximum
/// as `saddle` (birth = min value, death = max value).
struct FeaturePair {
  int id = -1;
  FeatureKind kind = FeatureKind::Join;
  int extremum = -1;
  int saddle = -1;
  double birth = 0.0;
  double death = 0.0;
  double persistence = 0.0;
  std::int64_t volume = 0;  // pixels; filled by analyze_channel
};

/// Elder-rule pairing on the join sweep and the split sweep of the contour
/// tree. A saddle where k > 2 branches meet terminates k - 1 features.
/// Ids: Global pair is 0, then join features by sweep, then split features.
std::vector<FeaturePair> pair_critical_points(const ContourTree& ct);

/// Same pairing read straight off the join and split trees. Agrees with
/// pair_critical_points whenever the two trees merge, and still matches the
/// sub/superlevel components when they do not.
std::vector<FeaturePair> pair_merge_trees(const AugmentedTree& join, const AugmentedTree& split);

/// Component of `act` minus the saddle that holds the extremum, plus the
/// saddle. Global pairs return every node. Sorted ascending.
std::vector<int> extract_feature_subtree(const AugmentedContourTree& act,
                                         const FeaturePair& pair);

std::int64_t pixel_volume(const SuperPixelGraph& graph, std::span<const int> nodes);

/// Preorder layout of the augmented contour tree rooted at its global
/// maximum. A feature subtree is then at most two preorder intervals, which
/// makes volumes O(1) and subset tests cheap for thousands of features.
class SubtreeIndex {
 public:
  struct Interval {
    int begin = 0;
    int end = 0;  // exclusive
  };
  struct Region {
    std::array<Interval, 2> spans{};
    int span_count = 0;
    std::int64_t node_count() const;
  };

  SubtreeIndex() = default;
  SubtreeIndex(const AugmentedContourTree& act, const SuperPixelGraph& graph);

  Region region(const FeaturePair& pair) const;
  std::int64_t volume(const Region& region) const;
  std::vector<int> nodes(const Region& region) const;
  bool contains(const Region& region, int node) const;
  int preorder(int node) const { return pre_[node]; }
  int node_at(int position) const { return by_pre_[position]; }

 private:
  std::vector<int> pre_;
  std::vector<int> by_pre_;
  std::vector<int> size_;
  std::vector<std::int64_t> child_offsets_;
  std::vector<int> children_;  // in preorder
  std::vector<std::int64_t> pixel_prefix_;
};

/// Everything derived from one channel: the graph, the three trees, pairs
/// (with volumes) and the subtree index.
///
/// With 4-connectivity the pixel grid has a hole at every 2x2 block whose
/// diagonals hold the two lowest and two highest values, and the join and
/// split trees may then admit no common contour tree. `merged` is false in
/// that case: `act` and `ct` stay empty, and a feature's subtree falls back to
/// the strict sublevel (join) or superlevel (split) component of its
/// extremum plus the saddle, read off the join or split tree.
struct ChannelTopology {
  SuperPixelGraph graph;
  AugmentedTree join;
  AugmentedTree split;
  bool merged = true;
  AugmentedContourTree act;
  ContourTree ct;
  std::vector<FeaturePair> pairs;
  SubtreeIndex index;        // over `act`, or over the join tree when !merged
  SubtreeIndex split_index;  // over the split tree, only when !merged
  std::vector<SubtreeIndex::Region> regions;  // parallel to pairs

  const SubtreeIndex& index_for(int pair_id) const {
    return !merged && pairs.at(pair_id).kind == FeatureKind::Split ? split_index : index;
  }
  std::vector<int> subtree(int pair_id) const {
    return index_for(pair_id).nodes(regions.at(pair_id));
  }
};

ChannelTopology analyze_channel(const ChannelField& field,
                                Connectivity connectivity = Connectivity::Eight);

}  // namespace ctedit
