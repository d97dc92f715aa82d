#include "ctedit/superpixel.hpp"

#include <algorithm>
#include <cmath>

#include "ctedit/errors.hpp"

namespace ctedit {

SuperPixelGraph build_superpixels(const ChannelField& field, Connectivity connectivity) {
  if (field.size() == 0) {
    throw Error(ErrorCode::InvalidArgument, "cannot build super-pixels of an empty field");
  }
  for (double v : field.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "channel field contains a non-finite value");
    }
  }

  SuperPixelGraph g;
  g.width_ = field.width;
  g.height_ = field.height;
  g.connectivity_ = connectivity;
  const std::size_t n = field.size();
  g.label_.assign(n, -1);

  // Raster-order flood fill: the first unlabeled pixel met is the minimum
  // raster index of its plateau, so ids come out in the required order.
  std::vector<std::int32_t> stack;
  std::vector<std::int64_t> sizes;
  int next_id = 0;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (g.label_[seed] >= 0) continue;
    const double value = field.values[seed];
    const int id = next_id++;
    g.values_.push_back(value);
    std::int64_t size = 0;
    g.label_[seed] = id;
    stack.push_back(static_cast<std::int32_t>(seed));
    while (!stack.empty()) {
      const std::int32_t p = stack.back();
      stack.pop_back();
      ++size;
      const int x = p % field.width;
      const int y = p / field.width;
      for_each_pixel_neighbor(x, y, field.width, field.height, connectivity,
                              [&](std::size_t q) {
                                if (g.label_[q] < 0 && field.values[q] == value) {
                                  g.label_[q] = id;
                                  stack.push_back(static_cast<std::int32_t>(q));
                                }
                              });
    }
    sizes.push_back(size);
  }

  const int nodes = next_id;
  g.member_offsets_.assign(nodes + 1, 0);
  for (int i = 0; i < nodes; ++i) g.member_offsets_[i + 1] = g.member_offsets_[i] + sizes[i];
  g.member_pixels_.resize(n);
  {
    std::vector<std::int64_t> cursor(g.member_offsets_.begin(), g.member_offsets_.end() - 1);
    for (std::size_t p = 0; p < n; ++p) {
      g.member_pixels_[cursor[g.label_[p]]++] = static_cast<std::int32_t>(p);
    }
  }

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::size_t p = 0; p < n; ++p) {
    const int x = static_cast<int>(p % field.width);
    const int y = static_cast<int>(p / field.width);
    const int a = g.label_[p];
    for_each_pixel_neighbor(x, y, field.width, field.height, connectivity,
                            [&](std::size_t q) {
                              const int b = g.label_[q];
                              if (q > p && a != b) {
                                edges.emplace_back(a, b);
                                edges.emplace_back(b, a);
                              }
                            });
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  g.adjacency_offsets_.assign(nodes + 1, 0);
  for (const auto& e : edges) ++g.adjacency_offsets_[e.first + 1];
  for (int i = 0; i < nodes; ++i) g.adjacency_offsets_[i + 1] += g.adjacency_offsets_[i];
  g.adjacency_.reserve(edges.size());
  for (const auto& e : edges) g.adjacency_.push_back(e.second);
  return g;
}

}  // namespace ctedit
