#include "ctedit/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "ctedit/errors.hpp"
#include "union_find.hpp"

namespace ctedit {

SweepOrder make_sweep_order(const SuperPixelGraph& graph) {
  SweepOrder order;
  order.values = graph.values();
  const int n = graph.node_count();
  order.ascending.resize(n);
  std::iota(order.ascending.begin(), order.ascending.end(), 0);
  std::sort(order.ascending.begin(), order.ascending.end(), [&](int a, int b) {
    const double va = order.values[a];
    const double vb = order.values[b];
    return va < vb || (va == vb && a < b);
  });
  order.rank.resize(n);
  for (int i = 0; i < n; ++i) order.rank[order.ascending[i]] = i;
  return order;
}

std::vector<int> AugmentedTree::child_counts() const {
  std::vector<int> counts(parent.size(), 0);
  for (int p : parent) {
    if (p >= 0) ++counts[p];
  }
  return counts;
}

namespace {

// Shared sweep for both trees over any adjacency. `sequence` is the
// insertion order; a neighbor counts as already inserted when its sequence
// position is earlier.
template <class Adjacency>
AugmentedTree sweep_tree(SweepOrder order, const Adjacency& graph, TreeKind kind) {
  AugmentedTree tree;
  tree.kind = kind;
  tree.order = std::move(order);
  const int n = tree.order.node_count();
  tree.parent.assign(n, -1);

  std::vector<int> sequence = tree.order.ascending;
  if (kind == TreeKind::Split) std::reverse(sequence.begin(), sequence.end());
  std::vector<int> position(n);
  for (int i = 0; i < n; ++i) position[sequence[i]] = i;

  detail::UnionFind components(n);
  std::vector<int> top(n);  // most recently inserted node of each component
  for (int i = 0; i < n; ++i) {
    const int v = sequence[i];
    top[v] = v;
    for (int u : graph.neighbors(v)) {
      if (position[u] > i) continue;
      const int ru = components.find(u);
      const int rv = components.find(v);
      if (ru == rv) continue;
      tree.parent[top[ru]] = v;
      const int merged = components.unite(ru, rv);
      top[merged] = v;
    }
  }
  if (n > 0) tree.root = sequence.back();
  return tree;
}

}  // namespace

AugmentedTree build_join_tree(const SuperPixelGraph& graph) {
  return sweep_tree(make_sweep_order(graph), graph, TreeKind::Join);
}

AugmentedTree build_split_tree(const SuperPixelGraph& graph) {
  return sweep_tree(make_sweep_order(graph), graph, TreeKind::Split);
}

AugmentedContourTree::AugmentedContourTree(SweepOrder order,
                                           std::vector<std::pair<int, int>> arcs)
    : order_(std::move(order)), arcs_(std::move(arcs)) {
  const int n = order_.node_count();
  offsets_.assign(n + 1, 0);
  for (const auto& [a, b] : arcs_) {
    ++offsets_[a + 1];
    ++offsets_[b + 1];
  }
  for (int i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : arcs_) {
    adjacency_[cursor[a]++] = b;
    adjacency_[cursor[b]++] = a;
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

int AugmentedContourTree::up_degree(int node) const {
  int count = 0;
  for (int u : neighbors(node)) count += order_.below(node, u) ? 1 : 0;
  return count;
}

int AugmentedContourTree::down_degree(int node) const {
  int count = 0;
  for (int u : neighbors(node)) count += order_.below(u, node) ? 1 : 0;
  return count;
}

AugmentedContourTree merge_to_contour_tree(const AugmentedTree& join,
                                           const AugmentedTree& split) {
  if (join.kind != TreeKind::Join || split.kind != TreeKind::Split) {
    throw Error(ErrorCode::MalformedTrees, "expected a join tree and a split tree");
  }
  const int n = join.node_count();
  if (split.node_count() != n || join.order.values != split.order.values) {
    throw Error(ErrorCode::MalformedTrees, "join and split trees cover different node sets");
  }

  // Children are tracked as (count, id sum): when exactly one child is left
  // the sum is its id, which is all the peeling step ever needs.
  std::vector<int> join_parent = join.parent;
  std::vector<int> split_parent = split.parent;
  std::vector<int> join_down(n, 0);
  std::vector<int> split_up(n, 0);
  std::vector<std::int64_t> join_down_sum(n, 0);
  std::vector<std::int64_t> split_up_sum(n, 0);
  for (int v = 0; v < n; ++v) {
    if (join_parent[v] >= 0) {
      ++join_down[join_parent[v]];
      join_down_sum[join_parent[v]] += v;
    }
    if (split_parent[v] >= 0) {
      ++split_up[split_parent[v]];
      split_up_sum[split_parent[v]] += v;
    }
  }

  std::vector<char> removed(n, 0);
  auto is_upper_leaf = [&](int v) { return split_up[v] == 0 && join_down[v] == 1; };
  auto is_lower_leaf = [&](int v) { return join_down[v] == 0 && split_up[v] == 1; };

  std::deque<int> queue;
  for (int v = 0; v < n; ++v) {
    if (is_upper_leaf(v) || is_lower_leaf(v)) queue.push_back(v);
  }

  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(n > 0 ? n - 1 : 0);
  int remaining = n;
  while (remaining > 1 && !queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    if (removed[x]) continue;

    int y;
    if (is_upper_leaf(x)) {
      y = split_parent[x];
      arcs.emplace_back(y, x);
      const int child = static_cast<int>(join_down_sum[x]);
      const int parent = join_parent[x];
      join_parent[child] = parent;
      if (parent >= 0) join_down_sum[parent] += child - x;
      --split_up[y];
      split_up_sum[y] -= x;
    } else if (is_lower_leaf(x)) {
      y = join_parent[x];
      arcs.emplace_back(x, y);
      const int child = static_cast<int>(split_up_sum[x]);
      const int parent = split_parent[x];
      split_parent[child] = parent;
      if (parent >= 0) split_up_sum[parent] += child - x;
      --join_down[y];
      join_down_sum[y] -= x;
    } else {
      continue;
    }
    removed[x] = 1;
    --remaining;
    if (is_upper_leaf(y) || is_lower_leaf(y)) queue.push_back(y);
  }
  if (remaining != 1 && n > 0) {
    throw Error(ErrorCode::MalformedTrees, "join and split trees are inconsistent");
  }
  AugmentedContourTree act(join.order, std::move(arcs));
  // Peeling can also finish on trees that no single contour tree explains
  // (4-connected holes); the merged tree must reproduce both inputs.
  if (sweep_tree(join.order, act, TreeKind::Join).parent != join.parent ||
      sweep_tree(join.order, act, TreeKind::Split).parent != split.parent) {
    throw Error(ErrorCode::MalformedTrees, "join and split trees are inconsistent");
  }
  return act;
}

ContourTree reduce_regular_nodes(const AugmentedContourTree& act) {
  ContourTree ct;
  ct.order = act.order();
  const int n = act.node_count();
  std::vector<char> regular(n, 0);
  for (int v = 0; v < n; ++v) {
    regular[v] = act.up_degree(v) == 1 && act.down_degree(v) == 1;
    if (!regular[v]) ct.nodes.push_back(v);
  }
  const auto& order = act.order();
  auto upper_neighbor = [&](int v) {
    for (int u : act.neighbors(v)) {
      if (order.below(v, u)) return u;
    }
    return -1;
  };
  // Each contracted arc is emitted once, walking upward from its lower end.
  for (int c : ct.nodes) {
    for (int u : act.neighbors(c)) {
      if (!order.below(c, u)) continue;
      ContourArc arc;
      arc.lower = c;
      int cur = u;
      while (regular[cur]) {
        arc.absorbed.push_back(cur);
        cur = upper_neighbor(cur);
      }
      arc.upper = cur;
      ct.arcs.push_back(std::move(arc));
    }
  }
  return ct;
}

bool ContourTree::is_critical(int node) const {
  return std::binary_search(nodes.begin(), nodes.end(), node);
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Join: return "join";
    case FeatureKind::Split: return "split";
    case FeatureKind::Global: return "global";
  }
  return "unknown";
}

std::vector<FeaturePair> pair_critical_points(const ContourTree& ct) {
  const auto& order = ct.order;
  const int k = static_cast<int>(ct.nodes.size());
  std::vector<FeaturePair> pairs;
  if (k == 0) return pairs;

  // Local indexing over critical nodes, sorted by sweep rank.
  std::vector<int> by_rank = ct.nodes;
  std::sort(by_rank.begin(), by_rank.end(),
            [&](int a, int b) { return order.below(a, b); });
  std::vector<int> local(order.node_count(), -1);
  for (int i = 0; i < k; ++i) local[by_rank[i]] = i;
  std::vector<std::vector<int>> adjacent(k);
  for (const auto& arc : ct.arcs) {
    adjacent[local[arc.lower]].push_back(local[arc.upper]);
    adjacent[local[arc.upper]].push_back(local[arc.lower]);
  }

  FeaturePair global;
  global.id = 0;
  global.kind = FeatureKind::Global;
  global.extremum = by_rank.front();
  global.saddle = by_rank.back();
  global.birth = order.values[global.extremum];
  global.death = order.values[global.saddle];
  global.persistence = global.death - global.birth;
  pairs.push_back(global);

  // In local indices rank order == index order, so the eldest branch of a
  // join is the one whose birth index is smallest (largest for splits).
  auto sweep = [&](FeatureKind kind) {
    const bool ascending = kind == FeatureKind::Join;
    detail::UnionFind components(k);
    std::vector<int> birth(k);
    std::vector<int> roots;
    for (int step = 0; step < k; ++step) {
      const int v = ascending ? step : k - 1 - step;
      birth[v] = v;
      roots.clear();
      for (int u : adjacent[v]) {
        const bool inserted = ascending ? u < v : u > v;
        if (!inserted) continue;
        const int r = components.find(u);
        if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
      }
      if (roots.empty()) continue;
      // eldest first, then dying branches in order of age
      std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        return ascending ? birth[a] < birth[b] : birth[a] > birth[b];
      });
      const int eldest_birth = birth[roots.front()];
      for (std::size_t i = 1; i < roots.size(); ++i) {
        FeaturePair p;
        p.id = static_cast<int>(pairs.size());
        p.kind = kind;
        p.extremum = by_rank[birth[roots[i]]];
        p.saddle = by_rank[v];
        p.birth = order.values[p.extremum];
        p.death = order.values[p.saddle];
        p.persistence = std::abs(p.birth - p.death);
        pairs.push_back(p);
      }
      int merged = v;
      for (int r : roots) merged = components.unite(merged, r);
      birth[components.find(v)] = eldest_birth;
    }
  };
  sweep(FeatureKind::Join);
  sweep(FeatureKind::Split);
  return pairs;
}

std::vector<FeaturePair> pair_merge_trees(const AugmentedTree& join, const AugmentedTree& split) {
  const auto& order = join.order;
  const int n = join.node_count();
  std::vector<FeaturePair> pairs;
  if (n == 0) return pairs;

  FeaturePair global;
  global.id = 0;
  global.kind = FeatureKind::Global;
  global.extremum = order.ascending.front();
  global.saddle = order.ascending.back();
  global.birth = order.values[global.extremum];
  global.death = order.values[global.saddle];
  global.persistence = global.death - global.birth;
  pairs.push_back(global);

  // A node with k children closes k components; the one born at the most
  // extreme rank survives and the other k - 1 die there, youngest last.
  auto sweep = [&](const AugmentedTree& tree, FeatureKind kind) {
    const bool ascending = kind == FeatureKind::Join;
    std::vector<std::vector<int>> children(n);
    for (int v = 0; v < n; ++v) {
      if (tree.parent[v] >= 0) children[tree.parent[v]].push_back(v);
    }
    std::vector<int> eldest(n);  // rank of the oldest extremum below each node
    for (int step = 0; step < n; ++step) {
      const int v = order.ascending[ascending ? step : n - 1 - step];
      auto& kids = children[v];
      if (kids.empty()) {
        eldest[v] = order.rank[v];
        continue;
      }
      std::sort(kids.begin(), kids.end(), [&](int a, int b) {
        return ascending ? eldest[a] < eldest[b] : eldest[a] > eldest[b];
      });
      for (std::size_t i = 1; i < kids.size(); ++i) {
        FeaturePair p;
        p.id = static_cast<int>(pairs.size());
        p.kind = kind;
        p.extremum = order.ascending[eldest[kids[i]]];
        p.saddle = v;
        p.birth = order.values[p.extremum];
        p.death = order.values[p.saddle];
        p.persistence = std::abs(p.birth - p.death);
        pairs.push_back(p);
      }
      eldest[v] = eldest[kids.front()];
    }
  };
  sweep(join, FeatureKind::Join);
  sweep(split, FeatureKind::Split);
  return pairs;
}

std::vector<int> extract_feature_subtree(const AugmentedContourTree& act,
                                         const FeaturePair& pair) {
  const int n = act.node_count();
  if (pair.kind == FeatureKind::Global) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  if (pair.saddle < 0 || pair.saddle >= n || pair.extremum < 0 || pair.extremum >= n ||
      pair.saddle == pair.extremum) {
    throw Error(ErrorCode::SaddleNotFound, "feature saddle is not a node of this tree");
  }
  std::vector<char> seen(n, 0);
  seen[pair.saddle] = 1;
  seen[pair.extremum] = 1;
  std::vector<int> out{pair.saddle, pair.extremum};
  std::vector<int> stack{pair.extremum};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : act.neighbors(v)) {
      if (seen[u]) continue;
      seen[u] = 1;
      out.push_back(u);
      stack.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t pixel_volume(const SuperPixelGraph& graph, std::span<const int> nodes) {
  std::int64_t total = 0;
  for (int v : nodes) total += graph.member_count(v);
  return total;
}

std::int64_t SubtreeIndex::Region::node_count() const {
  std::int64_t total = 0;
  for (int i = 0; i < span_count; ++i) total += spans[i].end - spans[i].begin;
  return total;
}

SubtreeIndex::SubtreeIndex(const AugmentedContourTree& act, const SuperPixelGraph& graph) {
  const int n = act.node_count();
  pre_.assign(n, -1);
  by_pre_.reserve(n);
  size_.assign(n, 1);
  std::vector<int> parent(n, -1);
  if (n == 0) return;

  const int root = act.order().ascending.back();
  // Iterative preorder; trees over large plateaus can be very deep.
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    pre_[v] = static_cast<int>(by_pre_.size());
    by_pre_.push_back(v);
    const auto nbrs = act.neighbors(v);
    for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
      if (*it == parent[v]) continue;
      parent[*it] = v;
      stack.push_back(*it);
    }
  }
  for (int i = n - 1; i > 0; --i) {
    const int v = by_pre_[i];
    size_[parent[v]] += size_[v];
  }

  child_offsets_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    if (parent[v] >= 0) ++child_offsets_[parent[v] + 1];
  }
  for (int v = 0; v < n; ++v) child_offsets_[v + 1] += child_offsets_[v];
  children_.resize(n > 0 ? n - 1 : 0);
  std::vector<std::int64_t> cursor(child_offsets_.begin(), child_offsets_.end() - 1);
  for (int i = 1; i < n; ++i) {
    const int v = by_pre_[i];
    children_[cursor[parent[v]]++] = v;
  }

  pixel_prefix_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    pixel_prefix_[i + 1] = pixel_prefix_[i] + graph.member_count(by_pre_[i]);
  }
}

SubtreeIndex::Region SubtreeIndex::region(const FeaturePair& pair) const {
  const int n = static_cast<int>(pre_.size());
  Region r;
  if (pair.kind == FeatureKind::Global) {
    r.spans[0] = {0, n};
    r.span_count = 1;
    return r;
  }
  if (pair.saddle < 0 || pair.saddle >= n || pair.extremum < 0 || pair.extremum >= n ||
      pair.saddle == pair.extremum) {
    throw Error(ErrorCode::SaddleNotFound, "feature saddle is not a node of this tree");
  }
  const int s = pre_[pair.saddle];
  const int m = pre_[pair.extremum];
  const int s_end = s + size_[pair.saddle];
  if (m > s && m < s_end) {
    // Extremum hangs below one child of the saddle; children are stored in
    // preorder, so the containing child is the last one starting at or before m.
    const auto first = children_.begin() + child_offsets_[pair.saddle];
    const auto last = children_.begin() + child_offsets_[pair.saddle + 1];
    auto it = std::upper_bound(first, last, m,
                               [&](int pos, int child) { return pos < pre_[child]; });
    const int child = *(it - 1);
    r.spans[0] = {s, s + 1};
    r.spans[1] = {pre_[child], pre_[child] + size_[child]};
    r.span_count = 2;
  } else {
    r.spans[0] = {0, s + 1};
    r.spans[1] = {s_end, n};
    r.span_count = s_end < n ? 2 : 1;
  }
  return r;
}

std::int64_t SubtreeIndex::volume(const Region& region) const {
  std::int64_t total = 0;
  for (int i = 0; i < region.span_count; ++i) {
    total += pixel_prefix_[region.spans[i].end] - pixel_prefix_[region.spans[i].begin];
  }
  return total;
}

std::vector<int> SubtreeIndex::nodes(const Region& region) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(region.node_count()));
  for (int i = 0; i < region.span_count; ++i) {
    for (int p = region.spans[i].begin; p < region.spans[i].end; ++p) out.push_back(by_pre_[p]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SubtreeIndex::contains(const Region& region, int node) const {
  const int p = pre_[node];
  for (int i = 0; i < region.span_count; ++i) {
    if (p >= region.spans[i].begin && p < region.spans[i].end) return true;
  }
  return false;
}

namespace {

AugmentedContourTree tree_as_undirected(const AugmentedTree& tree) {
  std::vector<std::pair<int, int>> arcs;
  arcs.reserve(tree.parent.size());
  for (int v = 0; v < tree.node_count(); ++v) {
    const int p = tree.parent[v];
    if (p < 0) continue;
    if (tree.kind == TreeKind::Join) {
      arcs.emplace_back(v, p);
    } else {
      arcs.emplace_back(p, v);
    }
  }
  return AugmentedContourTree(tree.order, std::move(arcs));
}

}  // namespace

ChannelTopology analyze_channel(const ChannelField& field, Connectivity connectivity) {
  ChannelTopology t;
  t.graph = build_superpixels(field, connectivity);
  t.join = build_join_tree(t.graph);
  t.split = build_split_tree(t.graph);
  try {
    t.act = merge_to_contour_tree(t.join, t.split);
  } catch (const Error& e) {
    // Only the 4-connected grid can have holes; on 8-connectivity a failed
    // merge is a real bug.
    if (connectivity != Connectivity::Four || e.code() != ErrorCode::MalformedTrees) throw;
    t.merged = false;
  }
  t.pairs = pair_merge_trees(t.join, t.split);
  if (t.merged) {
    t.ct = reduce_regular_nodes(t.act);
    t.index = SubtreeIndex(t.act, t.graph);
  } else {
    t.index = SubtreeIndex(tree_as_undirected(t.join), t.graph);
    t.split_index = SubtreeIndex(tree_as_undirected(t.split), t.graph);
  }
  t.regions.reserve(t.pairs.size());
  for (auto& p : t.pairs) {
    const auto& index = t.index_for(p.id);
    t.regions.push_back(index.region(p));
    p.volume = index.volume(t.regions.back());
  }
  return t;
}

}  // namespace ctedit
