#pragma once

#include <string>
#include <vector>

#include "ctedit/field.hpp"
#include "ctedit/superpixel.hpp"
#include "ctedit/topology.hpp"

// Slow reference implementations for checking the contour-tree pipeline.
// Nothing here reuses the sweeps, trees or pairing of the main library; the
// level-set oracle works on raw pixels with a fresh flood fill per value.
namespace ctedit::oracle {

struct BirthDeath {
  FeatureKind kind = FeatureKind::Join;
  double birth = 0.0;
  double death = 0.0;

  auto operator<=>(const BirthDeath&) const = default;
};

/// Elder-rule pairs from connected components of {f <= t} and {f >= t}
/// at every distinct value t, plus the (min, max) global pair. Sorted.
std::vector<BirthDeath> level_set_pairs(const ChannelField& field, Connectivity connectivity);

/// The library's pairs in the same sorted form.
std::vector<BirthDeath> as_birth_death(const std::vector<FeaturePair>& pairs);

/// Super-pixels with every neighbor higher (minima) or lower (maxima).
std::vector<int> local_minima(const SuperPixelGraph& graph);
std::vector<int> local_maxima(const SuperPixelGraph& graph);

/// Number of components that `node` touches among super-pixels ordered
/// above it (up) or below it (down), using ascending (value, id) order.
/// These are the contour tree's up and down degrees.
int up_degree(const SuperPixelGraph& graph, int node);
int down_degree(const SuperPixelGraph& graph, int node);

/// The component of the strict sublevel set below the saddle (superlevel for
/// split features) that holds the extremum, plus the saddle. Sorted. This is
/// always contained in the feature subtree; the two coincide unless the
/// region encloses features of the opposite kind.
std::vector<int> level_set_region(const SuperPixelGraph& graph, const FeaturePair& pair);

struct CheckReport {
  bool ok = true;
  std::string message;
};

/// Runs the oracle comparisons against analyze_channel on one field.
CheckReport check_field(const ChannelField& field, Connectivity connectivity);

}  // namespace ctedit::oracle
