#include "ctedit/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace ctedit::oracle {
namespace {

// Labels the pixels where `inside` holds; -1 elsewhere. Returns the count.
template <typename Pred>
int label_components(const ChannelField& field, Connectivity connectivity, Pred inside,
                     std::vector<int>& label) {
  const int w = field.width;
  const int h = field.height;
  label.assign(field.values.size(), -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < field.values.size(); ++start) {
    if (label[start] >= 0 || !inside(field.values[start])) continue;
    label[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      for_each_pixel_neighbor(x, y, w, h, connectivity, [&](std::size_t q) {
        if (label[q] < 0 && inside(field.values[q])) {
          label[q] = count;
          stack.push_back(q);
        }
      });
    }
    ++count;
  }
  return count;
}

// One sweep. `ascending` = sublevel sets (join features).
void sweep(const ChannelField& field, Connectivity connectivity, bool ascending,
           std::vector<BirthDeath>& out) {
  std::vector<double> levels = field.values;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (!ascending) std::reverse(levels.begin(), levels.end());

  const auto older = [&](double a, double b) { return ascending ? a < b : a > b; };
  std::vector<int> prev_label;
  std::vector<double> prev_birth;
  std::vector<int> label;
  bool first = true;
  for (double t : levels) {
    const int count = label_components(
        field, connectivity, [&](double v) { return ascending ? v <= t : v >= t; }, label);
    std::vector<double> birth(count, t);
    std::vector<std::set<int>> absorbed(count);
    if (!first) {
      for (std::size_t p = 0; p < label.size(); ++p) {
        if (prev_label[p] >= 0) absorbed[label[p]].insert(prev_label[p]);
      }
    }
    for (int c = 0; c < count; ++c) {
      if (absorbed[c].empty()) continue;
      std::vector<double> births;
      for (int old : absorbed[c]) births.push_back(prev_birth[old]);
      std::sort(births.begin(), births.end(), older);
      birth[c] = births.front();
      for (std::size_t k = 1; k < births.size(); ++k) {
        out.push_back({ascending ? FeatureKind::Join : FeatureKind::Split, births[k], t});
      }
    }
    prev_label = label;
    prev_birth = std::move(birth);
    first = false;
  }
}

std::vector<int> ascending_rank(const SuperPixelGraph& graph) {
  std::vector<int> order(graph.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (graph.value(a) != graph.value(b)) return graph.value(a) < graph.value(b);
    return a < b;
  });
  std::vector<int> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  return rank;
}

// Components of the nodes accepted by `keep`, restricted to the neighbors of
// `node`: how many distinct components does `node` touch.
template <typename Keep>
int touched_components(const SuperPixelGraph& graph, int node, Keep keep) {
  std::vector<int> comp(graph.node_count(), -1);
  int touched = 0;
  for (int start : graph.neighbors(node)) {
    if (!keep(start) || comp[start] >= 0) continue;
    comp[start] = touched;
    std::queue<int> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int n : graph.neighbors(u)) {
        if (n != node && keep(n) && comp[n] < 0) {
          comp[n] = touched;
          frontier.push(n);
        }
      }
    }
    ++touched;
  }
  return touched;
}

template <typename Keep>
std::vector<int> component_of(const SuperPixelGraph& graph, int seed, Keep keep) {
  std::vector<char> seen(graph.node_count(), 0);
  std::vector<int> out{seed};
  seen[seed] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int n : graph.neighbors(out[i])) {
      if (!seen[n] && keep(n)) {
        seen[n] = 1;
        out.push_back(n);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<BirthDeath> level_set_pairs(const ChannelField& field, Connectivity connectivity) {
  std::vector<BirthDeath> out;
  sweep(field, connectivity, true, out);
  sweep(field, connectivity, false, out);
  const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
  out.push_back({FeatureKind::Global, *lo, *hi});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BirthDeath> as_birth_death(const std::vector<FeaturePair>& pairs) {
  std::vector<BirthDeath> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.kind, p.birth, p.death});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> local_minima(const SuperPixelGraph& graph) {
  std::vector<int> out;
  for (int v = 0; v < graph.node_count(); ++v) {
    const auto nb = graph.neighbors(v);
    if (std::all_of(nb.begin(), nb.end(), [&](int n) { return graph.value(n) > graph.value(v); })) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<int> local_maxima(const SuperPixelGraph& graph) {
  std::vector<int> out;
  for (int v = 0; v < graph.node_count(); ++v) {
    const auto nb = graph.neighbors(v);
    if (std::all_of(nb.begin(), nb.end(), [&](int n) { return graph.value(n) < graph.value(v); })) {
      out.push_back(v);
    }
  }
  return out;
}

int up_degree(const SuperPixelGraph& graph, int node) {
  const auto rank = ascending_rank(graph);
  return touched_components(graph, node, [&](int u) { return rank[u] > rank[node]; });
}

int down_degree(const SuperPixelGraph& graph, int node) {
  const auto rank = ascending_rank(graph);
  return touched_components(graph, node, [&](int u) { return rank[u] < rank[node]; });
}

std::vector<int> level_set_region(const SuperPixelGraph& graph, const FeaturePair& pair) {
  std::vector<int> out;
  if (pair.kind == FeatureKind::Global) {
    out.resize(graph.node_count());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  const auto rank = ascending_rank(graph);
  const int cut = rank[pair.saddle];
  if (pair.kind == FeatureKind::Join) {
    out = component_of(graph, pair.extremum, [&](int u) { return rank[u] < cut; });
  } else {
    out = component_of(graph, pair.extremum, [&](int u) { return rank[u] > cut; });
  }
  out.push_back(pair.saddle);
  std::sort(out.begin(), out.end());
  return out;
}

CheckReport check_field(const ChannelField& field, Connectivity connectivity) {
  std::ostringstream problems;
  const auto topo = analyze_channel(field, connectivity);

  if (level_set_pairs(field, connectivity) != as_birth_death(topo.pairs)) {
    problems << "pair multiset differs from the level-set oracle; ";
  }

  const auto& graph = topo.graph;
  for (int v = 0; topo.merged && v < graph.node_count(); ++v) {
    if (topo.act.up_degree(v) != up_degree(graph, v) ||
        topo.act.down_degree(v) != down_degree(graph, v)) {
      problems << "degree mismatch at super-pixel " << v << "; ";
      break;
    }
  }

  const auto leaves = [](const AugmentedTree& tree) {
    const auto counts = tree.child_counts();
    return std::count(counts.begin(), counts.end(), 0);
  };
  if (leaves(topo.join) != static_cast<long>(local_minima(graph).size())) {
    problems << "join tree leaves differ from local minima; ";
  }
  if (leaves(topo.split) != static_cast<long>(local_maxima(graph).size())) {
    problems << "split tree leaves differ from local maxima; ";
  }

  for (const auto& pair : topo.pairs) {
    const auto indexed = topo.subtree(pair.id);
    const auto region = level_set_region(graph, pair);
    if (!topo.merged) {
      if (indexed != region) {
        problems << "fallback subtree differs from the level-set region of pair " << pair.id
                 << "; ";
        break;
      }
      continue;
    }
    if (indexed != extract_feature_subtree(topo.act, pair)) {
      problems << "subtree index disagrees with tree search for pair " << pair.id << "; ";
      break;
    }
    if (!std::includes(indexed.begin(), indexed.end(), region.begin(), region.end())) {
      problems << "level-set region escapes the subtree of pair " << pair.id << "; ";
      break;
    }
  }

  CheckReport report;
  report.message = problems.str();
  report.ok = report.message.empty();
  if (!report.message.empty()) report.message.resize(report.message.size() - 2);
  return report;
}

}  // namespace ctedit::oracle
