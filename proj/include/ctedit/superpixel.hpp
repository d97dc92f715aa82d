#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctedit/field.hpp"

namespace ctedit {

/// Plateau-merged pixel graph: each node is a maximal connected set of
/// pixels sharing one (bit-equal) value. Node ids are ordered by the
/// smallest raster index among a node's members. Members and neighbor lists
/// are stored CSR-style and are sorted ascending.
class SuperPixelGraph {
 public:
  SuperPixelGraph() = default;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Connectivity connectivity() const noexcept { return connectivity_; }
  int node_count() const noexcept { return static_cast<int>(values_.size()); }
  std::size_t pixel_count() const noexcept { return label_.size(); }

  double value(int node) const { return values_[node]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Node owning raster index `pixel`.
  int node_of(std::size_t pixel) const { return label_[pixel]; }
  const std::vector<int>& labels() const noexcept { return label_; }

  std::span<const std::int32_t> members(int node) const {
    return {member_pixels_.data() + member_offsets_[node],
            member_pixels_.data() + member_offsets_[node + 1]};
  }
  std::int64_t member_count(int node) const {
    return member_offsets_[node + 1] - member_offsets_[node];
  }

  std::span<const std::int32_t> neighbors(int node) const {
    return {adjacency_.data() + adjacency_offsets_[node],
            adjacency_.data() + adjacency_offsets_[node + 1]};
  }

  friend SuperPixelGraph build_superpixels(const ChannelField& field,
                                           Connectivity connectivity);

 private:
  int width_ = 0;
  int height_ = 0;
  Connectivity connectivity_ = Connectivity::Eight;
  std::vector<double> values_;
  std::vector<int> label_;
  std::vector<std::int64_t> member_offsets_;
  std::vector<std::int32_t> member_pixels_;
  std::vector<std::int64_t> adjacency_offsets_;
  std::vector<std::int32_t> adjacency_;
};

SuperPixelGraph build_superpixels(const ChannelField& field,
                                  Connectivity connectivity = Connectivity::Eight);

/// Calls fn(neighbor_raster_index) for each in-bounds neighbor of (x, y).
template <typename Fn>
void for_each_pixel_neighbor(int x, int y, int width, int height,
                             Connectivity connectivity, Fn&& fn) {
  static constexpr int kDx[8] = {-1, 1, 0, 0, -1, 1, -1, 1};
  static constexpr int kDy[8] = {0, 0, -1, 1, -1, -1, 1, 1};
  const int count = connectivity == Connectivity::Four ? 4 : 8;
  for (int k = 0; k < count; ++k) {
    const int nx = x + kDx[k];
    const int ny = y + kDy[k];
    if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
    fn(static_cast<std::size_t>(ny) * width + nx);
  }
}

}  // namespace ctedit
